# Generated by Django 5.2.4 on 2026-10-12 09:14

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('simulate', 'Simulate'), ('verify', 'Verify'), ('spectral', 'Spectral')], max_length=10)),
                ('scenario_name', models.CharField(max_length=255)),
                ('config_digest', models.CharField(max_length=64)),
                ('seed', models.BigIntegerField(blank=True, null=True)),
                ('trials', models.PositiveIntegerField(blank=True, null=True)),
                ('which', models.CharField(blank=True, max_length=10)),
                ('status', models.CharField(choices=[('success', 'Success'), ('pass', 'Pass'), ('fail', 'Fail')], default='success', max_length=10)),
                ('summary', models.JSONField(blank=True, default=dict)),
                ('output_dir', models.CharField(blank=True, max_length=1024)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
            },
        ),
    ]
