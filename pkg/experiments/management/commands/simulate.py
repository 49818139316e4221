from experiments.management.base import LabCommand
from experiments.models import ExperimentRun
from experiments.services import SUMMARY_FILE, TRAJECTORY_FILE, load_scenario, record_run, run_simulate


class Command(LabCommand):
    help = "Simulate the centralized and decentralized detectors and write per-step records"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_run_arguments(parser)

    def run(self, scenario, seed=None, trials=None, output_dir=None, workers=1, no_record=False, **options):
        loaded = load_scenario(scenario)
        summary, directory = run_simulate(loaded, seed=seed, trials=trials, output_dir=output_dir, workers=workers)
        if not no_record:
            record_run(
                ExperimentRun.Command.SIMULATE, loaded.name, loaded.config_digest, ExperimentRun.Status.SUCCESS,
                summary, directory, seed=summary["seed"], trials=summary["trials"],
            )
        self.stdout.write(
            f"B={summary['B']:.6g}  I={summary['I']:.6g}  sigma2={summary['sigma2']:.6g}  eta={summary['eta']:.6g}"
        )
        self.stdout.write(self.style.SUCCESS(
            f"Simulated {summary['trials']} trials of {summary['horizon']} steps: "
            f"{directory / TRAJECTORY_FILE}, {directory / SUMMARY_FILE}"
        ))
