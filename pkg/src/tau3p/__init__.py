"""Smallest Weil heights of totally p-adic cubic algebraic numbers."""

from .abelian import AbelianRecord, build_abelian_table, conductor, splitting_classes, verify_global_bound
from .corpus import Corpus, CorpusEntry, build_corpus, load_corpus, load_or_build_corpus, save_corpus
from .cubic import CubicPoly, depress, discriminant, height_of_root, mahler_measure
from .splitting import oracle_splits, splits_completely
from .tau import TauResult, cross_validate, emit_table, tau3

__all__ = [
    "AbelianRecord",
    "Corpus",
    "CorpusEntry",
    "CubicPoly",
    "TauResult",
    "build_abelian_table",
    "build_corpus",
    "conductor",
    "cross_validate",
    "depress",
    "discriminant",
    "emit_table",
    "height_of_root",
    "load_corpus",
    "load_or_build_corpus",
    "mahler_measure",
    "oracle_splits",
    "save_corpus",
    "splits_completely",
    "splitting_classes",
    "tau3",
    "verify_global_bound",
]
