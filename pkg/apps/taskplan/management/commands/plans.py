"""
Lista los órdenes candidatos de visita de un escenario
"""
from django.core.management.base import BaseCommand

from apps.core.exceptions import CommandErrorMixin, PlanningError
from apps.taskplan.services import candidate_plans, describe_plans
from apps.world.scenario import resolve_scenario


class Command(CommandErrorMixin, BaseCommand):
    help = 'Imprimir los órdenes candidatos (permutaciones que respetan las ventanas)'

    def add_arguments(self, parser):
        parser.add_argument('scenario', type=str, help='Ruta del escenario o nombre de un escenario incluido')

    def handle(self, *args, **options):
        try:
            scenario = resolve_scenario(options['scenario'])
            plans = candidate_plans(scenario.fragment)
        except PlanningError as exc:
            raise self.fail(exc)
        self.stdout.write(describe_plans(scenario.fragment, plans))
        if not plans:
            self.stdout.write(self.style.WARNING("Ningún orden respeta las precedencias"))
