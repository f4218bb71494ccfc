"""
Ejecuta el benchmark comparativo de planificadores
"""
from dataclasses import replace
from pathlib import Path

from django.core.management.base import BaseCommand

from apps.bench.rendering import plot_summary
from apps.bench.services import BenchmarkConfig, run_benchmark, summarize
from apps.core.exceptions import CommandErrorMixin, PlanningError


class Command(CommandErrorMixin, BaseCommand):
    help = 'Ejecutar corridas sembradas de ambos planificadores y exportar CSV, JSON y curvas de costo'

    def add_arguments(self, parser):
        parser.add_argument('config', type=str, help='Archivo YAML de configuración del benchmark')
        parser.add_argument('--paper-scale', '--full-scale', dest='full_scale', action='store_true',
                            help='60 corridas de 300 s (BENCHMARK_DEFAULTS full_*)')
        parser.add_argument('--deterministic', action='store_true',
                            help='Reloj de iteraciones: CSV y JSON reproducibles byte a byte')
        parser.add_argument('--runs', type=int, default=None, help='Corridas por planificador (default: las de la configuración)')
        parser.add_argument('--workers', type=int, default=None, help='Procesos del pool (default: los de la configuración)')
        parser.add_argument('--backend', choices=('local', 'celery'), default='local',
                            help='local (pool de procesos) o celery (grupo de tareas) (default: local)')
        parser.add_argument('--store', action='store_true', help='Guardar cada corrida como BenchmarkRun')
        parser.add_argument('--output-dir', type=str, default=None,
                            help='Directorio de resultados (default: PLANNER_OUTPUT_DIR)')
        parser.add_argument('--no-plots', action='store_true', help='No dibujar las curvas de costo')

    def handle(self, *args, **options):
        try:
            config = BenchmarkConfig.load(options['config'])
            if options['full_scale']:
                config = config.full_scale()
            overrides = {}
            if options['deterministic']:
                overrides['deterministic'] = True
            if options['runs'] is not None:
                overrides['runs'] = options['runs']
            if options['workers'] is not None:
                overrides['workers'] = options['workers']
            if options['output_dir']:
                overrides['output_dir'] = Path(options['output_dir'])
            config = replace(config, **overrides)

            self.stdout.write(
                f"Benchmark: {', '.join(config.scenarios)} | {', '.join(config.planners)} | "
                f"{config.runs} corridas de {config.time_budget:g} s"
            )
            results = run_benchmark(config, backend=options['backend'], store=options['store'])
            summary = summarize(config, results)
            plots = [] if options['no_plots'] else plot_summary(summary, config.output_dir)
        except PlanningError as exc:
            raise self.fail(exc)

        for scenario, planners in sorted(summary['results'].items()):
            for planner, data in sorted(planners.items()):
                self.stdout.write(
                    f"  {scenario}/{planner}: {data['satisfied_runs']}/{data['runs']} satisfechas, "
                    f"mediana de estados {data['median_final_states']:g}, "
                    f"mediana de costo final {data['median_final_best_cost']:g}"
                )
        if summary['soundness_violations']:
            self.stdout.write(self.style.WARNING(
                f"{summary['soundness_violations']} soluciones no confirmadas por la re-simulación"
            ))
        for path in plots:
            self.stdout.write(f"  curva: {path}")
        self.stdout.write(self.style.SUCCESS(f"Resultados en {config.output_dir}"))
