#!/usr/bin/env python3
"""
Module des plans en treillis pour latmaj
Représentation, validation, projections, coïncidences et génération aléatoire
"""

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from latmaj.errors import (
    ColumnOutOfRangeError,
    DesignParseError,
    EmptySubsetError,
    InvalidParameterError,
    LatmajError,
    LevelOutOfRangeError,
    QNotDividingNError,
    RaggedRowsError,
    TooFewRunsError,
    UnbalancedError,
)

logger = logging.getLogger(__name__)

LABELS_DIRECTIVE = "labels:"


def _frozen_int_array(values, ndim: int) -> np.ndarray:
    array = np.array(values, copy=True)
    if array.ndim != ndim:
        raise DesignParseError(f"Tableau de dimension {ndim} attendu (reçu {array.ndim})")
    if array.size and not np.issubdtype(array.dtype, np.integer):
        if not np.all(np.equal(np.mod(array, 1), 0)):
            raise DesignParseError("Niveaux entiers attendus")
    array = array.astype(np.int64)
    array.setflags(write=False)
    return array


def check_divides(n: int, q: int) -> None:
    """Vérifier n >= 2, q >= 2 et q | n"""
    if n < 2:
        raise TooFewRunsError(n)
    if q < 2:
        raise DesignParseError(f"q doit être >= 2 (q={q})")
    if n % q:
        raise QNotDividingNError(n, q)


@dataclass(frozen=True, eq=False)
class Design:
    """Plan X(n, q^s): matrice n×s de niveaux dans {0..q-1}, équilibrée par colonne"""

    matrix: np.ndarray
    q: int
    label: str | None = None
    column_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        matrix = _frozen_int_array(self.matrix, 2)
        object.__setattr__(self, "matrix", matrix)
        n, s = matrix.shape
        if s == 0:
            raise DesignParseError("Au moins une colonne est requise")
        if n < 2:
            raise TooFewRunsError(n)
        if self.q < 2:
            raise DesignParseError(f"q doit être >= 2 (q={self.q})")

        bad = np.argwhere((matrix < 0) | (matrix >= self.q))
        if bad.size:
            row, col = (int(v) for v in bad[0])
            raise LevelOutOfRangeError(row, col, int(matrix[row, col]), self.q)

        if n % self.q:
            raise QNotDividingNError(n, self.q)
        expected = n // self.q
        for j in range(s):
            counts = np.bincount(matrix[:, j], minlength=self.q)
            if np.any(counts != expected):
                raise UnbalancedError(j, counts.tolist(), expected)

        if self.column_labels is not None:
            labels = tuple(self.column_labels)
            if len(labels) != s:
                raise DesignParseError(f"{len(labels)} étiquettes pour {s} colonnes")
            object.__setattr__(self, "column_labels", labels)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def s(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def params(self) -> tuple[int, int, int]:
        return self.n, self.s, self.q

    @property
    def name(self) -> str:
        return self.label or f"U({self.n}, {self.q}^{self.s})"

    def column_name(self, j: int) -> str:
        if self.column_labels:
            return self.column_labels[j]
        return str(j + 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Design):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash((self.q, self.matrix.shape, self.matrix.tobytes()))


@dataclass(frozen=True, eq=False)
class PCVector:
    """Vecteur des coïncidences par paires β_1..β_m dans l'ordre (i, k), i < k"""

    values: np.ndarray
    n: int | None = None
    s: int | None = None
    q: int | None = None

    def __post_init__(self):
        values = _frozen_int_array(self.values, 1)
        if values.size == 0:
            raise LatmajError("Vecteur de coïncidences vide")
        if np.any(values < 0) or (self.s is not None and np.any(values > self.s)):
            raise LatmajError("Coïncidences hors de 0..s")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "PCVector":
        return cls(np.asarray(values))

    @property
    def m(self) -> int:
        return int(self.values.size)

    @cached_property
    def sum(self) -> int:
        return int(self.values.sum())

    @cached_property
    def sorted(self) -> np.ndarray:
        result = np.sort(self.values)
        result.setflags(write=False)
        return result

    @cached_property
    def mean(self) -> Fraction:
        return Fraction(self.sum, self.m)

    @property
    def theta(self) -> int:
        return self.mean.numerator // self.mean.denominator

    @property
    def frac(self) -> Fraction:
        return self.mean - self.theta

    def counts(self) -> np.ndarray:
        """Effectifs de chaque valeur 0..s (0..max si s inconnu)"""
        top = self.s if self.s is not None else int(self.values.max())
        return np.bincount(self.values, minlength=top + 1)

    def cumsum(self) -> np.ndarray:
        """Sommes cumulées du vecteur trié par ordre croissant"""
        return np.cumsum(self.sorted)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PCVector):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())


@dataclass(frozen=True, eq=False)
class CoincidenceMatrix:
    """Matrice symétrique M[i][k] = β(x_i, x_k), diagonale égale à s"""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen_int_array(self.matrix, 2))

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    def upper(self) -> np.ndarray:
        """Triangle supérieur strict dans l'ordre des paires"""
        return self.matrix[np.triu_indices(self.n, k=1)]


class EquidistanceClass(str, Enum):
    EQUIDISTANT = "equidistant"
    WEAK_EQUIDISTANT = "weak_equidistant"
    NEITHER = "neither"


# Lecture / écriture

def parse_design(text: str, q: int | None = None, label: str | None = None) -> Design:
    """Lire un plan: une ligne par essai, niveaux entiers séparés par espaces ou tabulations

    Les lignes vides et les commentaires '#' sont ignorés; '#q=<int>' fixe q
    et '# labels: A B ...' nomme les colonnes. Sans q, q = max + 1.
    """
    rows: list[list[int]] = []
    q_directive = None
    labels = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.replace(" ", "").startswith("q=") and not rows:
                try:
                    q_directive = int(body.split("=", 1)[1])
                except ValueError:
                    raise DesignParseError(f"Ligne {lineno}: directive q invalide") from None
            elif body.lower().startswith(LABELS_DIRECTIVE):
                labels = tuple(body[len(LABELS_DIRECTIVE):].split())
            continue
        try:
            values = [int(token) for token in line.split()]
        except ValueError:
            raise DesignParseError(f"Ligne {lineno}: entiers attendus") from None
        if rows and len(values) != len(rows[0]):
            raise RaggedRowsError(lineno, len(rows[0]), len(values))
        rows.append(values)

    if not rows:
        raise DesignParseError("Aucun essai dans le fichier")

    if q is None:
        q = q_directive if q_directive is not None else max(max(row) for row in rows) + 1
    design = Design(np.array(rows, dtype=np.int64), q, label=label, column_labels=labels)
    logger.debug("Plan lu: %s", design.params)
    return design


def format_design(d: Design) -> str:
    """Texte du plan au format fichier (inverse de parse_design)"""
    lines = [f"#q={d.q}"]
    if d.column_labels:
        lines.append(f"# {LABELS_DIRECTIVE} " + " ".join(d.column_labels))
    lines.extend(" ".join(str(v) for v in row) for row in d.matrix.tolist())
    return "\n".join(lines) + "\n"


def read_design(path: str | Path, q: int | None = None) -> Design:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise DesignParseError(f"{path}: texte UTF-8 attendu (octet {e.start})") from None
    return parse_design(text, q=q, label=path.stem)


def write_design(path: str | Path, d: Design) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_design(d))


def bundled_design(name: str) -> Design:
    """Plans fournis avec le paquet: 'table1' (27×8, q=3) et 'table3' (8×6, q=2)"""
    source = resources.files("latmaj") / "data" / f"{name}.txt"
    if not source.is_file():
        raise FileNotFoundError(f"Plan fourni inconnu: {name}")
    return parse_design(source.read_text(encoding="utf-8"), label=name)


# Projections

def project(d: Design, cols: Sequence[int]) -> Design:
    """Sous-plan X_u sur les colonnes cols (strictement croissantes, base 0)"""
    cols = [int(c) for c in cols]
    if not cols:
        raise EmptySubsetError()
    for pos, c in enumerate(cols):
        if not 0 <= c < d.s or (pos and c <= cols[pos - 1]):
            raise ColumnOutOfRangeError(c, d.s)
    labels = tuple(d.column_labels[c] for c in cols) if d.column_labels else None
    return Design(d.matrix[:, cols], d.q, label=subset_label(d, cols), column_labels=labels)


def subset_label(d: Design, cols: Sequence[int]) -> str:
    names = [d.column_name(c) for c in cols]
    sep = "" if d.column_labels and all(len(x) == 1 for x in names) else ","
    return "{" + sep.join(names) + "}"


def projections(d: Design, k: int) -> Iterator[tuple[tuple[int, ...], Design]]:
    """Les C(s, k) sous-plans à k colonnes, sous-ensembles en ordre lexicographique"""
    if not 1 <= k <= d.s:
        raise ColumnOutOfRangeError(k, d.s + 1)
    for cols in itertools.combinations(range(d.s), k):
        yield cols, project(d, cols)


# Coïncidences

def pc_total(n: int, s: int, q: int) -> int:
    """Somme des coïncidences de tout plan équilibré: (ns/2)(n/q - 1)"""
    total = Fraction(n * s, 2) * (Fraction(n, q) - 1)
    assert total.denominator == 1
    return int(total)


def pc_mean(n: int, s: int, q: int) -> Fraction:
    """β̄ = s(n - q) / (q(n - 1))"""
    return Fraction(s * (n - q), q * (n - 1))


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(i: int, k: int, n: int) -> int:
    """Position de la paire (i, k), i < k, base 0 (n(i-1)+k-i(i+1)/2 en base 1)"""
    if not 0 <= i < k < n:
        raise ValueError(f"Paire invalide ({i}, {k}) pour n={n}")
    return i * n - i * (i + 1) // 2 + (k - i - 1)


def pair_of_index(r: int, n: int) -> tuple[int, int]:
    if not 0 <= r < pair_count(n):
        raise ValueError(f"Indice de paire {r} hors de 0..{pair_count(n) - 1}")
    i = 0
    while r >= n - 1 - i:
        r -= n - 1 - i
        i += 1
    return i, i + 1 + r


def coincidence_matrix(d: Design) -> CoincidenceMatrix:
    """M = O·Oᵀ où O est le codage indicateur (n × s·q) du plan"""
    onehot = (d.matrix[:, :, None] == np.arange(d.q)).reshape(d.n, d.s * d.q)
    onehot = onehot.astype(np.int64)
    return CoincidenceMatrix(onehot @ onehot.T)


def pc_vector(d: Design) -> PCVector:
    values = coincidence_matrix(d).upper()
    pc = PCVector(values, d.n, d.s, d.q)
    expected = pc_total(d.n, d.s, d.q)
    if pc.sum != expected:
        raise LatmajError(f"Somme des coïncidences {pc.sum} != {expected}")
    return pc


def equidistance_class(d: Design | PCVector) -> EquidistanceClass:
    pc = d if isinstance(d, PCVector) else pc_vector(d)
    spread = int(pc.values.max() - pc.values.min())
    if spread == 0:
        return EquidistanceClass.EQUIDISTANT
    if spread == 1:
        return EquidistanceClass.WEAK_EQUIDISTANT
    return EquidistanceClass.NEITHER


# Génération

def seed_sequence(seed: int, *spawn_key: int) -> np.random.SeedSequence:
    if int(seed) < 0:
        raise InvalidParameterError(f"Graine négative: {seed}")
    return np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in spawn_key))


def column_generator(seed: int, column: int) -> np.random.Generator:
    """Flux Philox propre à (seed, colonne), indépendant de l'ordre de parcours"""
    return np.random.Generator(np.random.Philox(seed_sequence(seed, column)))


def random_balanced(n: int, s: int, q: int, seed: int) -> Design:
    """Plan équilibré aléatoire: chaque colonne est une permutation (Fisher-Yates)
    du multiensemble contenant chaque niveau n/q fois"""
    check_divides(n, q)
    if s < 1:
        raise ColumnOutOfRangeError(s, 1)
    base = np.repeat(np.arange(q, dtype=np.int64), n // q)
    columns = [column_generator(seed, j).permutation(base) for j in range(s)]
    return Design(np.column_stack(columns), q, label=f"random(n={n}, s={s}, q={q}, seed={seed})")
