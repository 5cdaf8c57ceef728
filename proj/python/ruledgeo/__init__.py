"""Ruled surfaces along a space curve in an adapted frame."""

from ._core import (
    Config,
    ConfigError,
    DomainError,
    Expr,
    GeometryError,
    ParseError,
    developable,
    frenet,
    load_config,
    parse,
    parse_config,
    run_cli,
    tessellate,
    theorems,
)

__all__ = [
    "Config",
    "ConfigError",
    "DomainError",
    "Expr",
    "GeometryError",
    "ParseError",
    "developable",
    "frenet",
    "load_config",
    "parse",
    "parse_config",
    "run_cli",
    "tessellate",
    "theorems",
]
