from django.db import models


class ExperimentRun(models.Model):
    """One execution of a lab command against a scenario file."""

    class Command(models.TextChoices):
        SIMULATE = "simulate", "Simulate"
        VERIFY = "verify", "Verify"
        SPECTRAL = "spectral", "Spectral"

    class Status(models.TextChoices):
        SUCCESS = "success", "Success"
        PASS = "pass", "Pass"
        FAIL = "fail", "Fail"

    command = models.CharField(max_length=10, choices=Command.choices)
    scenario_name = models.CharField(max_length=255)
    config_digest = models.CharField(max_length=64) # sha256 of the scenario file bytes
    seed = models.BigIntegerField(null=True, blank=True)
    trials = models.PositiveIntegerField(null=True, blank=True)
    which = models.CharField(max_length=10, blank=True) # verify only
    status = models.CharField(max_length=10, choices=Status.choices, default=Status.SUCCESS)
    summary = models.JSONField(default=dict, blank=True)
    output_dir = models.CharField(max_length=1024, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        label = f"{self.command} {self.which}".strip()
        return f"{label} of {self.scenario_name} ({self.status})"

    class Meta:
        ordering = ['-created_at', '-id']
