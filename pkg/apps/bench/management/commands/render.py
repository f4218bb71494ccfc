"""
Dibuja un escenario con su guía y su trayectoria
"""
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand

from apps.bench.rendering import render
from apps.core.exceptions import CommandErrorMixin, PlanningError
from apps.geolead.services import load_lead
from apps.kinoplanner.services import load_trajectory
from apps.world.scenario import resolve_scenario


class Command(CommandErrorMixin, BaseCommand):
    help = 'Dibujar un escenario en SVG (o PDF) con guía y trayectoria opcionales'

    def add_arguments(self, parser):
        parser.add_argument('scenario', type=str, help='Ruta del escenario o nombre de un escenario incluido')
        parser.add_argument('--trajectory', type=str, default=None, help='Archivo de trayectoria escrito por solve')
        parser.add_argument('--lead', type=str, default=None, help='Archivo YAML de guía escrito por lead')
        parser.add_argument('--output', type=str, default=None,
                            help='Archivo .svg o .pdf (default: <PLANNER_OUTPUT_DIR>/<escenario>.svg)')

    def handle(self, *args, **options):
        try:
            scenario = resolve_scenario(options['scenario'])
            trajectory = load_trajectory(options['trajectory']) if options['trajectory'] else None
            lead = load_lead(options['lead']) if options['lead'] else None
            output = Path(options['output'] or Path(settings.PLANNER_OUTPUT_DIR) / f"{scenario.name}.svg")
            path = render(scenario, output, trajectory=trajectory, lead=lead)
        except PlanningError as exc:
            raise self.fail(exc)
        self.stdout.write(self.style.SUCCESS(f"Dibujo escrito en {path}"))
