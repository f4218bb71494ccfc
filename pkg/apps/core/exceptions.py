"""
Sistema centralizado de manejo de errores y códigos de error estándar.
"""
from enum import Enum
import logging

from django.core.management.base import CommandError

logger = logging.getLogger(__name__)


class ErrorCode(Enum):
    """Códigos de error estándar del sistema."""

    # Errores generales (1000-1999)
    GENERAL_ERROR = "ERR_1000"
    VALIDATION_ERROR = "ERR_1001"
    NOT_FOUND = "ERR_1002"

    # Errores de fórmulas STL (2000-2999)
    FORMULA_SYNTAX = "ERR_2000"
    INTERVAL_INVALID = "ERR_2001"
    UNKNOWN_IDENTIFIER = "ERR_2002"
    FRAGMENT_VIOLATION = "ERR_2003"
    EMPTY_WINDOW = "ERR_2004"
    MONITOR_UNSUPPORTED = "ERR_2005"
    TRACE_INVALID = "ERR_2006"

    # Errores de escenarios y geometría (3000-3999)
    SCENARIO_PARSE = "ERR_3000"
    SCENARIO_INVALID = "ERR_3001"
    GEOMETRY_INVALID = "ERR_3002"
    SCENARIO_NOT_FOUND = "ERR_3003"

    # Errores de dinámica (4000-4999)
    CONTROL_BOUNDS_INVALID = "ERR_4000"

    # Errores de planificación de tareas (5000-5999)
    PLAN_CAP_EXCEEDED = "ERR_5000"

    # Errores del camino guía (6000-6999)
    LEAD_NO_PATH = "ERR_6000"
    SAMPLER_EXHAUSTED = "ERR_6001"
    LAYER_INVALID = "ERR_6002"

    # Errores del planificador cinodinámico (7000-7999)
    PLANNER_PARAMS_INVALID = "ERR_7000"

    # Errores de benchmark y archivos (8000-8999)
    BENCHMARK_CONFIG_INVALID = "ERR_8000"
    OUTPUT_IO = "ERR_8001"
    FILE_FORMAT_INVALID = "ERR_8002"


class PlanningError(Exception):
    """Excepción base para errores de planificación."""

    def __init__(self, error_code: ErrorCode, message: str = None, details: dict = None):
        self.error_code = error_code
        self.message = message or get_error_message(error_code)
        self.details = details or {}
        super().__init__(self.message)


class ValidationError(PlanningError):
    """Entrada inválida: fórmula, escenario, parámetros o configuración."""
    pass


class SearchExhaustedError(PlanningError):
    """Una búsqueda agotó su presupuesto sin encontrar resultado."""
    pass


class EvaluationError(PlanningError):
    """Valor semántico indefinido (por ejemplo, ventana sin muestras)."""
    pass


class FormulaSyntaxError(ValidationError):
    """Error de sintaxis con posición (línea y columna)."""

    def __init__(self, message: str, line: int, column: int, details: dict = None):
        details = dict(details or {})
        details.update({'line': line, 'column': column})
        self.line = line
        self.column = column
        super().__init__(ErrorCode.FORMULA_SYNTAX, message, details)


class IntervalError(ValidationError):
    """Intervalo temporal con a > b, a negativo o a infinito."""

    def __init__(self, message: str, details: dict = None):
        super().__init__(ErrorCode.INTERVAL_INVALID, message, details)


class UnknownIdentifierError(ValidationError):
    """Identificador que no corresponde a ninguna variable de estado."""

    def __init__(self, name: str, known=()):
        super().__init__(
            ErrorCode.UNKNOWN_IDENTIFIER,
            f"Identificador desconocido: '{name}'",
            {'identifier': name, 'known': list(known)},
        )
        self.name = name


class FragmentError(ValidationError):
    """La fórmula no pertenece al fragmento de metas alcanzables."""

    def __init__(self, message: str, subformula: str = None):
        super().__init__(ErrorCode.FRAGMENT_VIOLATION, message, {'subformula': subformula})
        self.subformula = subformula


class ScenarioError(ValidationError):
    """Error de lectura o validación de un escenario, con ruta de campo."""

    def __init__(self, error_code: ErrorCode, message: str, field: str = None, details: dict = None):
        details = dict(details or {})
        if field:
            details['field'] = field
            message = f"{field}: {message}"
        self.field = field
        super().__init__(error_code, message, details)


class PlanCapExceededError(ValidationError):
    """Demasiadas metas para enumerar permutaciones."""
    pass


class NoPathError(SearchExhaustedError):
    """RRT* no alcanzó la región meta dentro del presupuesto."""
    pass


class SamplerExhaustedError(SearchExhaustedError):
    """El muestreador no encontró un punto libre tras los intentos permitidos."""
    pass


def get_error_message(error_code: ErrorCode, language: str = 'es') -> str:
    """Obtiene el mensaje de error localizado."""

    messages = {
        'es': {
            ErrorCode.GENERAL_ERROR: "Error general del sistema",
            ErrorCode.VALIDATION_ERROR: "Error de validación de datos",
            ErrorCode.NOT_FOUND: "Recurso no encontrado",

            ErrorCode.FORMULA_SYNTAX: "Error de sintaxis en la fórmula",
            ErrorCode.INTERVAL_INVALID: "Intervalo temporal inválido",
            ErrorCode.UNKNOWN_IDENTIFIER: "Identificador desconocido",
            ErrorCode.FRAGMENT_VIOLATION: "La fórmula no pertenece al fragmento de planificación",
            ErrorCode.EMPTY_WINDOW: "La ventana temporal no contiene muestras",
            ErrorCode.MONITOR_UNSUPPORTED: "Operador no soportado por el monitor incremental",
            ErrorCode.TRACE_INVALID: "Traza inválida",

            ErrorCode.SCENARIO_PARSE: "Error de lectura del escenario",
            ErrorCode.SCENARIO_INVALID: "Escenario inválido",
            ErrorCode.GEOMETRY_INVALID: "Geometría inválida",
            ErrorCode.SCENARIO_NOT_FOUND: "Escenario no encontrado",

            ErrorCode.CONTROL_BOUNDS_INVALID: "Límites de control inválidos",

            ErrorCode.PLAN_CAP_EXCEEDED: "Demasiadas metas para enumerar órdenes candidatos",

            ErrorCode.LEAD_NO_PATH: "No se encontró camino guía",
            ErrorCode.SAMPLER_EXHAUSTED: "Muestreador agotado sin punto libre",
            ErrorCode.LAYER_INVALID: "Índice de capa inválido",

            ErrorCode.PLANNER_PARAMS_INVALID: "Parámetros del planificador inválidos",

            ErrorCode.BENCHMARK_CONFIG_INVALID: "Configuración de benchmark inválida",
            ErrorCode.OUTPUT_IO: "Error de escritura de resultados",
            ErrorCode.FILE_FORMAT_INVALID: "Formato de archivo inválido",
        }
    }

    return messages.get(language, {}).get(error_code, error_code.value)


# Códigos de salida de la CLI
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_NO_SOLUTION = 3


def exit_code_for(exc: Exception) -> int:
    """Código de salida de la CLI correspondiente a una excepción."""
    if isinstance(exc, ValidationError):
        return EXIT_VALIDATION
    if isinstance(exc, SearchExhaustedError):
        return EXIT_NO_SOLUTION
    return EXIT_ERROR


class CommandErrorMixin:
    """Mixin para comandos de gestión que traduce errores de planificación."""

    def fail(self, exc: Exception) -> CommandError:
        """Registra el error y devuelve un CommandError con el código de salida."""
        if isinstance(exc, PlanningError):
            logger.error(
                f"Planning Error: {exc.error_code.value} - {exc.message}",
                extra={
                    'error_code': exc.error_code.value,
                    'details': exc.details,
                }
            )
            message = f"[{exc.error_code.value}] {exc.message}"
        else:
            logger.exception("Error inesperado en comando")
            message = str(exc)
        return CommandError(message, returncode=exit_code_for(exc))

    def no_solution(self, message: str) -> CommandError:
        """Error de salida para búsquedas sin solución."""
        return CommandError(message, returncode=EXIT_NO_SOLUTION)
