import argparse

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import DetectionLabError


def positive_int(value):
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def non_negative_int(value):
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return number


class LabCommand(BaseCommand):
    """Options shared by the lab commands and the translation of lab errors to CommandError."""

    def add_arguments(self, parser):
        parser.add_argument("scenario", help="Scenario YAML file, or the name of a shipped preset")
        parser.add_argument("--output-dir", help="Directory for result files (default: from the scenario)")
        parser.add_argument("--no-record", action="store_true", help="Do not store the run in the database")

    def add_run_arguments(self, parser):
        parser.add_argument("--seed", type=non_negative_int, help="Override the scenario's base seed")
        parser.add_argument("--trials", type=positive_int, help="Override the scenario's trial count")
        parser.add_argument(
            "--workers", type=positive_int, default=settings.DETECTION_LAB["DEFAULT_WORKERS"],
            help="Worker processes for independent trials",
        )

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except DetectionLabError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}") from exc

    def run(self, **options):
        raise NotImplementedError
