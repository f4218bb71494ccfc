"""
Parser de fórmulas STL en la gramática concreta (ver docs/stl-grammar.md).
"""
from __future__ import annotations

import math
from typing import Sequence

from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from apps.core.exceptions import FormulaSyntaxError, PlanningError, UnknownIdentifierError

from .formula import (
    STATE_VARIABLES,
    DiskPredicate,
    Eventually,
    EventuallyUnbounded,
    Formula,
    Globally,
    LinearPredicate,
    Not,
    Pred,
    Relation,
    TimeInterval,
    TrueFormula,
    Until,
    make_and,
    make_or,
)

GRAMMAR = r'''
    ?start: formula

    ?formula: implication

    ?implication: disjunction
        | disjunction "->" implication          -> implies

    ?disjunction: conjunction
        | disjunction "|" conjunction           -> or_

    ?conjunction: until
        | conjunction "&" until                 -> and_

    ?until: unary
        | unary "U" interval unary              -> until

    ?unary: atom
        | "!" unary                             -> not_
        | "F" interval unary                    -> eventually
        | "F" unary                             -> eventually_unbounded
        | "G" interval unary                    -> globally

    ?atom: "true"                               -> true_
        | "false"                               -> false_
        | disk
        | linear_predicate
        | "(" formula ")"

    disk: "dist" "(" NAME "," NAME ";" number "," number ")" RELATION number
    linear_predicate: linear RELATION number
    linear: signed_term (addop term)*
    signed_term: MINUS? term
    addop: PLUS | MINUS
    term: NUMBER "*" NAME                       -> scaled_term
        | NAME                                  -> bare_term

    interval: "[" number "," bound "]"
    ?bound: number
        | "inf"                                 -> infinity
    number: MINUS? NUMBER

    PLUS: "+"
    MINUS: "-"
    RELATION: ">=" | "<=" | ">" | "<"
    NAME: /[a-z_][a-z0-9_]*/

    %import common.NUMBER
    %import common.WS
    %ignore WS
'''

_parser = Lark(GRAMMAR, parser='lalr', start='start', propagate_positions=False)


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Convierte el árbol de lark en nodos de fórmula."""

    def __init__(self, variables: Sequence[str] = STATE_VARIABLES):
        super().__init__()
        self.variables = tuple(variables)

    def _index(self, name_token) -> int:
        name = str(name_token)
        if name not in self.variables:
            raise UnknownIdentifierError(name, self.variables)
        return self.variables.index(name)

    # Conectivos

    def implies(self, left, right):
        return make_or([Not(left), right])

    def or_(self, left, right):
        return make_or([left, right])

    def and_(self, left, right):
        return make_and([left, right])

    def until(self, left, interval, right):
        return Until(left, right, interval)

    def not_(self, child):
        return Not(child)

    def eventually(self, interval, child):
        return Eventually(child, interval)

    def eventually_unbounded(self, child):
        return EventuallyUnbounded(child)

    def globally(self, interval, child):
        return Globally(child, interval)

    def true_(self):
        return TrueFormula()

    def false_(self):
        return Not(TrueFormula())

    # Predicados

    def disk(self, first, second, cx, cy, relation, radius):
        if str(relation) != '<=':
            raise FormulaSyntaxError(
                f"El predicado de disco solo admite '<=' (se encontró '{relation}')",
                relation.line, relation.column,
            )
        axes = (self._index(first), self._index(second))
        return Pred(DiskPredicate((cx, cy), radius, axes=axes, variables=self.variables))

    def linear_predicate(self, coefficients, relation, threshold):
        return Pred(LinearPredicate(coefficients, Relation(str(relation)), threshold, self.variables))

    def linear(self, first, *rest):
        coefficients = [0.0] * len(self.variables)
        index, value = first
        coefficients[index] += value
        for op, (index, value) in zip(rest[0::2], rest[1::2]):
            coefficients[index] += -value if op == '-' else value
        return tuple(coefficients)

    def signed_term(self, *args):
        if len(args) == 2:
            index, value = args[1]
            return index, -value
        return args[0]

    def addop(self, token):
        return str(token)

    def scaled_term(self, number, name):
        return self._index(name), float(number)

    def bare_term(self, name):
        return self._index(name), 1.0

    # Números e intervalos

    def interval(self, a, b):
        return TimeInterval(a, b)

    def infinity(self):
        return math.inf

    def number(self, *args):
        if len(args) == 2:
            return -float(args[1])
        return float(args[0])


def parse_formula(text: str, variables: Sequence[str] = STATE_VARIABLES) -> Formula:
    """
    Parsea una fórmula en la gramática concreta.

    Args:
        text: Texto de la fórmula
        variables: Nombres de las componentes del estado

    Returns:
        Formula: árbol de sintaxis

    Raises:
        FormulaSyntaxError: texto mal formado (con línea y columna)
        IntervalError: intervalo con a > b
        UnknownIdentifierError: variable desconocida
    """
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as exc:
        raise FormulaSyntaxError(_describe(exc), exc.line, exc.column, {'text': text}) from exc
    except LarkError as exc:
        raise FormulaSyntaxError(str(exc), -1, -1, {'text': text}) from exc

    try:
        return FormulaBuilder(variables).transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, PlanningError):
            raise exc.orig_exc from None
        raise


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedEOF):
        return "Fin inesperado de la fórmula"
    if isinstance(exc, UnexpectedCharacters):
        return f"Carácter inesperado '{exc.char}' en línea {exc.line}, columna {exc.column}"
    token = getattr(exc, 'token', None)
    return f"Símbolo inesperado '{token}' en línea {exc.line}, columna {exc.column}"
