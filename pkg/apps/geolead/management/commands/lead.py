"""
Construye el camino guía de un orden candidato
"""
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand

from apps.bench.rendering import render
from apps.core.exceptions import CommandErrorMixin, ErrorCode, PlanningError, ValidationError
from apps.geolead.services import build_lead, save_lead
from apps.taskplan.services import candidate_plans
from apps.world.scenario import resolve_scenario


class Command(CommandErrorMixin, BaseCommand):
    help = 'Calcular el camino guía de un orden y escribirlo en YAML con un dibujo SVG'

    def add_arguments(self, parser):
        parser.add_argument('scenario', type=str, help='Ruta del escenario o nombre de un escenario incluido')
        parser.add_argument('--order', type=int, default=0, help='Índice del orden candidato (default: 0)')
        parser.add_argument('--seed', type=int, default=None, help='Semilla base (default: la del escenario)')
        parser.add_argument(
            '--output',
            type=str,
            default=None,
            help='Archivo YAML de salida (default: <PLANNER_OUTPUT_DIR>/<escenario>__lead<k>.yaml)'
        )
        parser.add_argument('--parallel', action='store_true', help='Calcular los tramos en hilos')

    def handle(self, *args, **options):
        try:
            scenario = resolve_scenario(options['scenario'])
            plans = candidate_plans(scenario.fragment)
            k = options['order']
            if not 0 <= k < len(plans):
                raise ValidationError(
                    ErrorCode.VALIDATION_ERROR,
                    f"--order {k} fuera de rango: hay {len(plans)} órdenes candidatos",
                )
            seed = scenario.seed if options['seed'] is None else options['seed']
            lead = build_lead(plans[k], scenario.fragment, scenario.workspace, scenario.start,
                              seed + k, scenario.lead, parallel=options['parallel'])
            output = Path(options['output'] or Path(settings.PLANNER_OUTPUT_DIR) / f"{scenario.name}__lead{k}.yaml")
            save_lead(lead, output)
            drawing = render(scenario, output.with_suffix('.svg'), lead=lead)
        except PlanningError as exc:
            raise self.fail(exc)

        self.stdout.write(f"Orden {k}: {' -> '.join(str(g) for g in lead.order)}")
        self.stdout.write(f"  {lead.layer_count} capas, {len(lead.polyline)} waypoints, longitud {lead.length:.2f} m")
        for span in lead.layer_spans:
            kind = 'región' if span.is_region else 'sub-camino'
            self.stdout.write(f"  capa {span.layer} ({kind}): waypoints {span.first}..{span.last}")
        self.stdout.write(self.style.SUCCESS(f"Guía escrita en {output} y {drawing}"))
