from experiments.management.base import LabCommand, positive_int
from experiments.models import ExperimentRun
from experiments.services import SPECTRAL_FILE, load_network, record_run, run_spectral


class Command(LabCommand):
    help = "Report the expected mixing matrix, sigma2, spectral gap, connectivity and mixing-deviation sums"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--t", type=positive_int, nargs="+", dest="mixing_times",
            help="t values of the mixing-deviation table (default: from the scenario)",
        )

    def run(self, scenario, mixing_times=None, output_dir=None, no_record=False, **options):
        network = load_network(scenario)
        if mixing_times:
            network["mixing_times"] = mixing_times
        report, directory = run_spectral(network, output_dir=output_dir)
        if not no_record:
            record_run(
                ExperimentRun.Command.SPECTRAL, network["name"], network["config_digest"],
                ExperimentRun.Status.SUCCESS, report, directory,
            )
        self.stdout.write(f"sigma2={report['sigma2']:.12g}  gap={report['spectral_gap']:.12g}")
        if report["connected"]:
            self.stdout.write(self.style.SUCCESS("connected in expectation"))
        else:
            self.stdout.write(self.style.WARNING("not connected in expectation"))
        self.stdout.write(f"report: {directory / SPECTRAL_FILE}")
