"""Bias induction and relational rule learning."""

import json

from ._automode import (
    Bias,
    ConfigError,
    Database,
    Examples,
    Generalizer,
    LearnConfig,
    LoadError,
    ValidationError,
    __version__,
    bottom_clause,
    covers,
    discover_inds,
    fragment_bias_text,
    fragment_database,
    fragment_examples_text,
    generate_negatives,
    induce_bias,
    learn,
    lgg,
    load_database,
    load_examples,
    parse_bias,
    parse_examples,
    write_fixture,
)
from ._automode import cross_validate as _cross_validate


def cross_validate(db, examples, bias, config=None, folds=5, seed=1):
    """k-fold cross validation; returns the report as a dict."""
    return json.loads(_cross_validate(db, examples, bias, config or LearnConfig(), folds, seed))


__all__ = [name for name in dir() if not name.startswith("_")]
