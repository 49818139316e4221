from django.core.management.base import CommandError

from analysis.montecarlo import BOUNDS
from experiments.management.base import LabCommand
from experiments.models import ExperimentRun
from experiments.services import load_scenario, record_run, run_verify


class Command(LabCommand):
    help = "Monte Carlo check of the cost bound (theorem1) or the TV error bound (prop1)"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--which", choices=BOUNDS, default="prop1", help="Bound to verify")
        self.add_run_arguments(parser)

    def run(self, scenario, which="prop1", seed=None, trials=None, output_dir=None, workers=1, no_record=False, **options):
        loaded = load_scenario(scenario)
        report, document, directory = run_verify(
            loaded, which, seed=seed, trials=trials, output_dir=output_dir, workers=workers,
        )
        if not no_record:
            status = ExperimentRun.Status.PASS if report.passed else ExperimentRun.Status.FAIL
            record_run(
                ExperimentRun.Command.VERIFY, loaded.name, loaded.config_digest, status,
                document, directory, seed=report.seed, trials=report.trials, which=which,
            )
        for checkpoint in report.checkpoints:
            self.stdout.write(
                f"t={checkpoint.t}: bound {checkpoint.bound.value:.6g}, "
                f"{checkpoint.violations}/{report.trials} violations"
            )
        line = (
            f"{which}: {report.violations}/{report.trials} violations "
            f"(rate {report.violation_rate:.4f}, allowed {report.delta + report.slack:.4f}) "
            f"-> {directory / f'verify_{which}.json'}"
        )
        if not report.passed:
            raise CommandError(f"verification failed: {line}")
        self.stdout.write(self.style.SUCCESS(f"verification passed: {line}"))
