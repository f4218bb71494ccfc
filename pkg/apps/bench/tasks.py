"""
Tareas de Celery para el benchmark
"""
import logging

from celery import shared_task

logger = logging.getLogger(__name__)


@shared_task
def ejecutar_corrida_benchmark(spec):
    """
    Ejecuta una corrida del benchmark en un worker.

    Args:
        spec: Diccionario de ``BenchmarkConfig.run_specs``

    Returns:
        dict: RunMetrics serializadas (los costos infinitos viajan como None)
    """
    from .services import execute_run, metrics_to_payload

    metrics = execute_run(spec)
    logger.info(f"Corrida {spec['run']} de {spec['scenario']}/{spec['planner']} terminada en el worker")
    return metrics_to_payload(metrics)
