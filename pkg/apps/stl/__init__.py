"""
Lógica temporal de señales: sintaxis, parser, semánticas y fragmento.
"""
