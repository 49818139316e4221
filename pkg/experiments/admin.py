from django.contrib import admin
from unfold.admin import ModelAdmin
from experiments.models import ExperimentRun


@admin.register(ExperimentRun)
class ExperimentRunAdmin(ModelAdmin):
    """Admin interface for recorded lab runs."""
    list_display = ("scenario_name", "command", "which", "status", "seed", "trials", "created_at")
    list_filter = ("command", "status")
    search_fields = ("scenario_name", "config_digest")
    readonly_fields = ("summary", "config_digest", "created_at")
