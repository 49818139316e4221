import pytest

from experiments.models import ExperimentRun


@pytest.mark.django_db
class TestExperimentRun:
    """For testing the run history model"""

    def test_defaults(self):
        run = ExperimentRun.objects.create(command="spectral", scenario_name="gossip-triangle", config_digest="0" * 64)
        assert run.status == ExperimentRun.Status.SUCCESS
        assert run.summary == {}
        assert run.seed is None
        assert str(run) == "spectral of gossip-triangle (success)"

    def test_verify_str(self):
        run = ExperimentRun(command="verify", which="prop1", scenario_name="reference-prop1", status="fail")
        assert str(run) == "verify prop1 of reference-prop1 (fail)"

    def test_ordering_newest_first(self):
        older = ExperimentRun.objects.create(command="simulate", scenario_name="a", config_digest="1" * 64)
        newer = ExperimentRun.objects.create(command="simulate", scenario_name="b", config_digest="2" * 64)
        assert list(ExperimentRun.objects.all()) == [newer, older]
