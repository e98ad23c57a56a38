"""Évaluation parallèle à ordre de résultat fixe"""

import concurrent.futures as _cf
import logging
from collections.abc import Callable, Iterable
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def resolve_threads(threads: int | None = None) -> int:
    """Nombre de threads effectif (argument explicite, sinon configuration)"""
    if threads is not None:
        return max(1, int(threads))
    from latmaj.config import config

    return config.threads


def map_ordered(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Appliquer fn à chaque élément; les résultats suivent l'ordre des entrées"""
    items = list(items)
    workers = min(resolve_threads(threads), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    logger.debug("map_ordered: %d éléments sur %d threads", len(items), workers)
    with _cf.ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
