"""
Exceptions de latmaj
Une classe par erreur du domaine, toutes dérivées de LatmajError
"""


class LatmajError(Exception):
    """Erreur de domaine (code de sortie 1 en ligne de commande)"""


# Plans

class DesignParseError(LatmajError, ValueError):
    """Fichier de plan illisible"""


class RaggedRowsError(DesignParseError):
    def __init__(self, row: int, expected: int, found: int):
        self.row = row
        super().__init__(
            f"Ligne {row}: {found} colonnes au lieu de {expected}"
        )


class LevelOutOfRangeError(LatmajError, ValueError):
    def __init__(self, row: int, column: int, level: int, q: int):
        self.row = row
        self.column = column
        super().__init__(
            f"Niveau {level} hors de {{0..{q - 1}}} (ligne {row + 1}, colonne {column + 1})"
        )


class UnbalancedError(LatmajError, ValueError):
    def __init__(self, column: int, counts: list[int], expected: int):
        self.column = column
        self.counts = counts
        super().__init__(
            f"Colonne {column + 1} non équilibrée: effectifs {counts}, attendu {expected} par niveau"
        )


class QNotDividingNError(LatmajError, ValueError):
    def __init__(self, n: int, q: int):
        super().__init__(f"q={q} ne divise pas n={n}")


class TooFewRunsError(LatmajError, ValueError):
    def __init__(self, n: int):
        super().__init__(f"Il faut au moins 2 essais (n={n})")


class EmptySubsetError(LatmajError, ValueError):
    def __init__(self):
        super().__init__("Sous-ensemble de colonnes vide")


class ColumnOutOfRangeError(LatmajError, ValueError):
    def __init__(self, column: int, s: int):
        super().__init__(f"Colonne {column} hors de 0..{s - 1} (ou ordre non strict)")


# Majorisation

class LengthMismatchError(LatmajError, ValueError):
    def __init__(self, left: int, right: int):
        super().__init__(f"Longueurs différentes: {left} != {right}")


class SumMismatchError(LatmajError, ValueError):
    def __init__(self, left: int, right: int):
        super().__init__(
            f"Sommes différentes: {left} != {right} (plans de classes U(n, q^s) différentes)"
        )


class MixedParametersError(LatmajError, ValueError):
    def __init__(self, expected: tuple, found: tuple, index: int):
        super().__init__(
            f"Plan #{index}: paramètres (n, s, q)={found}, attendu {expected}"
        )


class MfNotIntegralError(LatmajError):
    def __init__(self, m: int, frac):
        super().__init__(f"m·f non entier (m={m}, f={frac})")


# Noyaux

class InvalidParameterError(LatmajError, ValueError):
    """Paramètre de noyau hors du domaine de convexité"""


class KernelSpecError(LatmajError, ValueError):
    def __init__(self, spec: str, position: int, reason: str):
        self.spec = spec
        self.position = position
        super().__init__(f"Noyau '{spec}' invalide à la position {position}: {reason}")


# Critères classiques

class OutOfRangeError(LatmajError, ValueError):
    """Indice j ou argument x hors de 0..s"""


class RouteMismatchError(LatmajError):
    """Les deux calculs du GWP divergent"""


class RelationMismatchError(LatmajError):
    """La relation linéaire entre motifs B et A n'est pas vérifiée"""


class TooFewFactorsError(LatmajError, ValueError):
    def __init__(self, s: int):
        super().__init__(f"Il faut au moins 2 facteurs (s={s})")


class WrongLevelCountError(LatmajError, ValueError):
    def __init__(self, q: int, expected: int = 2):
        super().__init__(f"Critère défini pour q={expected} seulement (q={q})")


class InvalidDiscrepancyParamsError(LatmajError, ValueError):
    """Paramètres (a, b) hors de a > 0, -a/(q-1) <= b < a"""


class UnsupportedLevelCountError(LatmajError, ValueError):
    def __init__(self, kind: str, q: int):
        super().__init__(f"{kind} non disponible pour q={q}")


# Construction

class StaleProposalError(LatmajError):
    def __init__(self, i: int, t: int, j: int):
        super().__init__(
            f"Proposition obsolète: niveaux de ({i + 1}, {t + 1}) en colonne {j + 1} modifiés"
        )
