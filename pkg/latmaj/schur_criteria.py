#!/usr/bin/env python3
"""
Module des critères de Schur pour latmaj
Noyaux convexes, critère Ψ(X; ψ) = Σ ψ(β_r) et borne inférieure universelle
m(1-f)ψ(θ) + mfψ(θ+1)
"""

import logging
import math
import numbers
import re
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

from latmaj.design_core import Design, PCVector, pair_count, pc_mean, pc_vector
from latmaj.errors import InvalidParameterError, KernelSpecError, OutOfRangeError
from latmaj.majorization import benchmark_pc

logger = logging.getLogger(__name__)

GOLDEN = (1 + math.sqrt(5)) / 2
REL_TOL = 1e-9

NAMED_CONSTANTS = {"golden": GOLDEN, "pi": math.pi}
_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")

Number = Fraction | float


class KernelKind(str, Enum):
    QUADRATIC = "quadratic"
    POWER = "power"
    EXPONENTIAL = "exp"
    VARIANCE = "variance"
    CHOOSE = "choose"
    TABLE = "table"


def _is_integral(value: Number) -> bool:
    return isinstance(value, Fraction) and value.denominator == 1


def _param_text(value: Number) -> str:
    for name, constant in NAMED_CONSTANTS.items():
        if isinstance(value, float) and value == constant:
            return name
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else format(float(value), ".12g")
    return format(value, ".12g")


@dataclass(frozen=True)
class ConvexKernel:
    """Noyau convexe ψ évalué aux coïncidences 0..s

    param porte l'exposant p, la base ρ ou l'ordre j selon le type; le noyau
    variance porte en plus la moyenne β̄ et le nombre de paires m.
    """

    kind: KernelKind
    param: Number | None = None
    mean: Fraction | None = None
    m: int | None = None
    table: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.kind is KernelKind.POWER and not self.param >= 1:
            raise InvalidParameterError(f"power: p doit être >= 1 (p={self.param})")
        if self.kind is KernelKind.EXPONENTIAL and not self.param > 1:
            raise InvalidParameterError(f"exp: ρ doit être > 1 (ρ={self.param})")
        if self.kind is KernelKind.CHOOSE and (not _is_integral(self.param) or self.param < 1):
            raise InvalidParameterError(f"choose: j doit être un entier >= 1 (j={self.param})")
        if self.kind is KernelKind.TABLE:
            if not self.table:
                raise InvalidParameterError("table: au moins une valeur est requise")
            for x in range(1, len(self.table) - 1):
                second = self.table[x - 1] - 2 * self.table[x] + self.table[x + 1]
                if second < 0:
                    raise InvalidParameterError(f"table: non convexe en x={x}")

    # Constructeurs

    @classmethod
    def quadratic(cls) -> "ConvexKernel":
        return cls(KernelKind.QUADRATIC)

    @classmethod
    def power(cls, p: Number) -> "ConvexKernel":
        return cls(KernelKind.POWER, p)

    @classmethod
    def exponential(cls, rho: Number) -> "ConvexKernel":
        return cls(KernelKind.EXPONENTIAL, rho)

    @classmethod
    def variance(cls, mean: Fraction | None = None, m: int | None = None) -> "ConvexKernel":
        return cls(KernelKind.VARIANCE, mean=mean, m=m)

    @classmethod
    def choose(cls, j: int) -> "ConvexKernel":
        return cls(KernelKind.CHOOSE, Fraction(j))

    @classmethod
    def tabulated(cls, values) -> "ConvexKernel":
        return cls(KernelKind.TABLE, table=tuple(Fraction(v) for v in values))

    def bind(self, n: int, s: int, q: int) -> "ConvexKernel":
        """Fixer β̄ et m du noyau variance pour la classe U(n, q^s)"""
        if self.kind is not KernelKind.VARIANCE:
            return self
        return replace(self, mean=pc_mean(n, s, q), m=pair_count(n))

    @property
    def exact(self) -> bool:
        """Vrai si ψ(x) est rationnel pour tout entier x"""
        if self.kind in (KernelKind.POWER, KernelKind.EXPONENTIAL):
            if self.kind is KernelKind.POWER:
                return _is_integral(self.param)
            return isinstance(self.param, Fraction)
        return True

    @property
    def label(self) -> str:
        if self.kind in (KernelKind.QUADRATIC, KernelKind.VARIANCE):
            return self.kind.value
        if self.kind is KernelKind.TABLE:
            return "table:" + ",".join(_param_text(v) for v in self.table)
        return f"{self.kind.value}:{_param_text(self.param)}"

    def __str__(self) -> str:
        return self.label


def kernel_eval(k: ConvexKernel, x: Number) -> Number:
    """ψ(x); rationnel exact pour les noyaux exacts en x entier"""
    if x < 0:
        raise OutOfRangeError(f"Argument négatif: {x}")
    integral = isinstance(x, numbers.Integral) or (isinstance(x, Fraction) and x.denominator == 1)
    if integral:
        x = int(x)

    match k.kind:
        case KernelKind.QUADRATIC:
            return Fraction(x) ** 2 if integral else float(x) ** 2
        case KernelKind.VARIANCE:
            if k.mean is None or k.m is None:
                raise InvalidParameterError("variance: noyau non lié à (n, s, q)")
            if integral or isinstance(x, Fraction):
                return (Fraction(x) - k.mean) ** 2 / k.m
            return (float(x) - float(k.mean)) ** 2 / k.m
        case KernelKind.POWER:
            if integral and _is_integral(k.param):
                return Fraction(x) ** int(k.param)
            return float(x) ** float(k.param)
        case KernelKind.EXPONENTIAL:
            if integral and isinstance(k.param, Fraction):
                return k.param ** x
            return math.exp(float(x) * math.log(float(k.param)))
        case KernelKind.CHOOSE:
            if not integral:
                raise OutOfRangeError(f"choose: argument entier attendu ({x})")
            return Fraction(math.comb(x, int(k.param)))
        case KernelKind.TABLE:
            if not integral or x >= len(k.table):
                raise OutOfRangeError(f"table: pas de valeur en x={x}")
            return k.table[x]
    raise InvalidParameterError(f"Noyau inconnu: {k.kind}")


def weighted_sum(k: ConvexKernel, weights: dict[int, int] | list[int]) -> Number:
    """Σ_v c_v ψ(v) pour des effectifs c_v aux valeurs entières v"""
    items = weights.items() if isinstance(weights, dict) else enumerate(weights)
    terms = [(int(c), kernel_eval(k, int(v))) for v, c in items if c]
    if k.exact:
        return sum((c * value for c, value in terms), Fraction(0))
    return math.fsum(c * float(value) for c, value in terms)


@dataclass(frozen=True)
class SchurValue:
    value: Number
    kernel: ConvexKernel
    bound: Number

    @property
    def gap(self) -> Number:
        return self.value - self.bound

    def attains_bound(self) -> bool:
        if isinstance(self.value, Fraction) and isinstance(self.bound, Fraction):
            return self.value == self.bound
        return math.isclose(float(self.value), float(self.bound), rel_tol=REL_TOL)


def psi_lower_bound(n: int, s: int, q: int, k: ConvexKernel) -> Number:
    """Borne inférieure de Σψ(β_r) sur U(n, q^s): m(1-f)ψ(θ) + mfψ(θ+1)"""
    bench = benchmark_pc(n, s, q)
    k = k.bind(n, s, q)
    return weighted_sum(k, {bench.theta: bench.count_theta, bench.theta + 1: bench.count_next})


def schur_psi(d: Design | PCVector, k: ConvexKernel) -> SchurValue:
    """Ψ(X; ψ) avec sa borne; le noyau variance prend la moyenne et le m du plan"""
    pc = d if isinstance(d, PCVector) else pc_vector(d)
    if pc.n is None or pc.s is None or pc.q is None:
        raise InvalidParameterError("Vecteur de coïncidences sans paramètres (n, s, q)")
    k = k.bind(pc.n, pc.s, pc.q)
    value = weighted_sum(k, pc.counts().tolist())
    bound = psi_lower_bound(pc.n, pc.s, pc.q, k)
    if float(value) < float(bound) - REL_TOL * abs(float(value)):
        logger.warning("Ψ=%s sous la borne %s (%s)", value, bound, k)
    return SchurValue(value, k, bound)


# Mini-langage des noyaux

def _parse_number(spec: str, token: str, position: int) -> Number:
    if token in NAMED_CONSTANTS:
        return NAMED_CONSTANTS[token]
    if not _DECIMAL.match(token):
        raise KernelSpecError(spec, position, f"nombre attendu, reçu '{token}'")
    return Fraction(token)


def parse_kernel_spec(spec: str) -> ConvexKernel:
    """Lire 'variance', 'quadratic', 'power:<p>', 'exp:<rho>', 'exp:golden',
    'choose:<j>' ou 'table:v0,v1,...'"""
    name, sep, rest = spec.partition(":")
    if not name or not name.isalpha() or not name.islower():
        raise KernelSpecError(spec, 0, "nom de noyau en minuscules attendu")
    try:
        kind = KernelKind(name)
    except ValueError:
        raise KernelSpecError(spec, 0, f"noyau inconnu '{name}'") from None

    params: list[Number] = []
    if sep:
        position = len(name) + 1
        for token in rest.split(","):
            if not token:
                raise KernelSpecError(spec, position, "paramètre vide")
            params.append(_parse_number(spec, token, position))
            position += len(token) + 1

    arity = {KernelKind.QUADRATIC: 0, KernelKind.VARIANCE: 0,
             KernelKind.POWER: 1, KernelKind.EXPONENTIAL: 1, KernelKind.CHOOSE: 1}
    expected = arity.get(kind)
    if expected is not None and len(params) != expected:
        raise KernelSpecError(spec, len(name), f"{expected} paramètre(s) attendu(s) pour {name}")
    if kind is KernelKind.TABLE and not params:
        raise KernelSpecError(spec, len(name), "table: valeurs attendues")

    try:
        match kind:
            case KernelKind.QUADRATIC:
                return ConvexKernel.quadratic()
            case KernelKind.VARIANCE:
                return ConvexKernel.variance()
            case KernelKind.POWER:
                return ConvexKernel.power(params[0])
            case KernelKind.EXPONENTIAL:
                return ConvexKernel.exponential(params[0])
            case KernelKind.CHOOSE:
                if not _is_integral(params[0]):
                    raise KernelSpecError(spec, len(name) + 1, "choose: entier attendu")
                return ConvexKernel.choose(int(params[0]))
            case KernelKind.TABLE:
                if any(isinstance(v, float) for v in params):
                    raise KernelSpecError(spec, len(name) + 1, "table: valeurs décimales attendues")
                return ConvexKernel.tabulated(params)
    except InvalidParameterError as e:
        raise KernelSpecError(spec, len(name) + 1, str(e)) from None
