"""
Resuelve un escenario: órdenes candidatos, guía y planificador por orden
"""
from pathlib import Path

import yaml
from django.conf import settings
from django.core.management.base import BaseCommand

from apps.core.exceptions import CommandErrorMixin, ErrorCode, PlanningError, ValidationError
from apps.highlevel.services import PLANNERS, describe_report, solve
from apps.kinoplanner.audit import audit_tree
from apps.kinoplanner.services import check_soundness, write_trajectory
from apps.world.scenario import resolve_scenario


class Command(CommandErrorMixin, BaseCommand):
    help = 'Resolver un escenario y escribir la trayectoria ganadora'

    def add_arguments(self, parser):
        parser.add_argument('scenario', type=str, help='Ruta del escenario o nombre de un escenario incluido')
        parser.add_argument('--planner', choices=PLANNERS, default=PLANNERS[0],
                            help='Planificador: lg (guiado) o baseline (default: lg)')
        parser.add_argument('--seed', type=int, default=None, help='Semilla base (default: la del escenario)')
        parser.add_argument('--budget', type=float, default=None,
                            help='Presupuesto total en segundos (default: el del escenario)')
        parser.add_argument('--deterministic', action='store_true',
                            help='Medir el presupuesto en iteraciones (PLANNER_ITERATION_CLOCK_HZ)')
        parser.add_argument('--first-solution', action='store_true',
                            help='Detener cada corrida en su primera solución')
        parser.add_argument('--concurrent', action='store_true', help='Intentar los órdenes en un pool de procesos')
        parser.add_argument('--workers', type=int, default=None, help='Procesos del pool (default: CPUs)')
        parser.add_argument('--dump-tree', action='store_true',
                            help='Escribir el árbol de cada corrida en YAML y auditarlo')
        parser.add_argument('--output', type=str, default=None,
                            help='Archivo de trayectoria (default: <PLANNER_OUTPUT_DIR>/<escenario>__<planificador>.traj)')

    def handle(self, *args, **options):
        planner = options['planner']
        try:
            scenario = resolve_scenario(options['scenario'])
            if options['budget'] is not None and not options['budget'] > 0:
                raise ValidationError(ErrorCode.VALIDATION_ERROR, "--budget debe ser positivo")
            report = solve(
                scenario,
                seed=options['seed'],
                budget=options['budget'],
                planner=planner,
                deterministic=options['deterministic'],
                anytime=not options['first_solution'],
                concurrent=options['concurrent'],
                workers=options['workers'],
                debug=options['dump_tree'],
            )
        except PlanningError as exc:
            raise self.fail(exc)

        self.stdout.write(describe_report(report))
        out_dir = Path(settings.PLANNER_OUTPUT_DIR)
        if options['dump_tree']:
            self._dump_trees(scenario, report, out_dir)

        winner = report.winning_attempt
        if winner is None:
            raise self.no_solution(f"{scenario.name}: ningún orden produjo una trayectoria satisfactoria")

        output = Path(options['output'] or out_dir / f"{scenario.name}__{planner}.traj")
        try:
            write_trajectory(winner.result.trajectory, output)
        except OSError as exc:
            raise self.fail(PlanningError(ErrorCode.OUTPUT_IO, f"No se pudo escribir {output}: {exc}"))
        soundness = check_soundness(winner.result.trajectory, scenario)
        if soundness.sound:
            self.stdout.write(f"Re-simulación: robustez {soundness.robustness:g}, error de estado {soundness.max_state_error:.2e}")
        else:
            self.stdout.write(self.style.WARNING(
                f"La re-simulación no confirma la solución (robustez {soundness.robustness})"
            ))
        self.stdout.write(self.style.SUCCESS(f"Trayectoria escrita en {output}"))

    def _dump_trees(self, scenario, report, out_dir: Path):
        for attempt in report.attempts:
            if attempt.result is None or attempt.result.snapshot is None:
                continue
            snapshot = attempt.result.snapshot
            path = out_dir / f"{scenario.name}__{report.planner}__tree{attempt.index}.yaml"
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(yaml.safe_dump(snapshot.to_dict(), sort_keys=False), encoding='utf-8')
            except OSError as exc:
                raise self.fail(PlanningError(ErrorCode.OUTPUT_IO, f"No se pudo escribir {path}: {exc}"))
            violations = audit_tree(snapshot, scenario, attempt.lead)
            if violations:
                self.stdout.write(self.style.WARNING(f"Árbol {attempt.index}: {len(violations)} violaciones"))
                for v in violations[:10]:
                    self.stdout.write(f"  [{v.rule}] nodo {v.node}: {v.message}")
            else:
                self.stdout.write(f"Árbol {attempt.index} escrito en {path} (auditoría sin violaciones)")
