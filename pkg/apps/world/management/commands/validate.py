"""
Valida un escenario y muestra su resumen
"""
from django.core.management.base import BaseCommand

from apps.core.exceptions import CommandErrorMixin, PlanningError
from apps.world.scenario import describe_scenario, resolve_scenario


class Command(CommandErrorMixin, BaseCommand):
    help = 'Validar un archivo de escenario (ruta o nombre de un escenario incluido)'

    def add_arguments(self, parser):
        parser.add_argument('scenario', type=str, help='Ruta del escenario o nombre (exp1, exp2, exp3, ...)')

    def handle(self, *args, **options):
        try:
            scenario = resolve_scenario(options['scenario'])
        except PlanningError as exc:
            raise self.fail(exc)
        self.stdout.write(describe_scenario(scenario))
        self.stdout.write(self.style.SUCCESS(f"Escenario {scenario.name} válido"))
