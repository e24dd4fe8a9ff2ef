"""Parity games built from LTL formulae, solved with trueness-guided
strategy improvement and Q-learning."""

from ._semgame import (
    BuildError,
    Game,
    ParseError,
    SchemaError,
    build_game,
    classify,
    game_from_json,
    load_game,
    normalize,
    random_formula,
    simplify,
    solve,
    trueness,
    zielonka_winner,
)

ALGORITHMS = ("si", "si-sem", "ql-win", "ql-pri", "ql-sem")

__all__ = [
    "ALGORITHMS",
    "BuildError",
    "Game",
    "ParseError",
    "SchemaError",
    "build_game",
    "classify",
    "game_from_json",
    "load_game",
    "normalize",
    "random_formula",
    "simplify",
    "solve",
    "trueness",
    "zielonka_winner",
]
