#!/usr/bin/env python3
"""
latmaj - majorisation des plans en treillis équilibrés
Application principale en ligne de commande
"""

import argparse
import logging
import sys

from rich.logging import RichHandler

from latmaj import __version__
from latmaj.command_handlers import (
    handle_bounds, handle_compare, handle_config, handle_criteria,
    handle_gen, handle_improve, handle_pc, handle_rank,
    handle_subdesigns, handle_validate,
)
from latmaj.config import config
from latmaj.errors import LatmajError
from latmaj.ui import LatmajUI

logger = logging.getLogger("latmaj")


def seed_value(text: str) -> int:
    """Graine entière positive ou nulle"""
    try:
        seed = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"entier attendu: '{text}'") from None
    if seed < 0:
        raise argparse.ArgumentTypeError(f"graine négative: {seed}")
    return seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latmaj",
        description="Majorisation, critères et construction de plans en treillis équilibrés",
    )
    parser.add_argument("--version", action="version", version=f"latmaj {__version__}")
    parser.add_argument("--debug", action="store_true", help="journalisation détaillée")
    sub = parser.add_subparsers(dest="command", required=True, metavar="commande")

    p = sub.add_parser("validate", help="vérifier un fichier de plan")
    p.add_argument("file")
    p.add_argument("--q", type=int, help="nombre de niveaux (sinon #q= ou max + 1)")

    p = sub.add_parser("pc", help="vecteur des coïncidences par paires")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--profile", action="store_true", help="profil cumulé trié et référence β̃")

    p = sub.add_parser("compare", help="relation de majorisation entre deux plans")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("rank", help="admissibilité puis classement par Ψ")
    p.add_argument("files", nargs="+")
    p.add_argument("--choose", type=int, help="classer les sous-plans à k colonnes")
    p.add_argument("--kernel", help="noyau: variance, quadratic, power:<p>, exp:<rho>, choose:<j>, table:...")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("criteria", help="rapport complet des critères et bornes")
    p.add_argument("file")
    p.add_argument("--disc-a", dest="disc_a")
    p.add_argument("--disc-b", dest="disc_b")
    p.add_argument("--kernel", action="append", help="noyau de Schur (répétable)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bounds", help="bornes inférieures pour U(n, q^s)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kernel")
    p.add_argument("--disc-a", dest="disc_a")
    p.add_argument("--disc-b", dest="disc_b")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("improve", help="descente par échanges Robin Hood")
    p.add_argument("file")
    p.add_argument("--kernel")
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--restarts", type=int, default=0)
    p.add_argument("--seed", type=seed_value, default=0)
    p.add_argument("--tie-policy", dest="tie_policy", default="lexicographic",
                   choices=["lexicographic", "random"])
    p.add_argument("--out")
    p.add_argument("--trace")

    p = sub.add_parser("gen", help="plan équilibré aléatoire")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=seed_value, required=True)
    p.add_argument("--out")

    p = sub.add_parser("subdesigns", help="sous-plans à k colonnes")
    p.add_argument("file")
    p.add_argument("--choose", type=int, required=True)
    p.add_argument("--list", action="store_true")
    p.add_argument("--json", action="store_true")

    sub.add_parser("config", help="afficher la configuration")
    return parser


class LatmajApp:
    """Application en ligne de commande: une commande par invocation"""

    def __init__(self):
        self.config = config
        self.ui = LatmajUI(decimals=config.display_decimals)
        self.cmd_handlers = {
            "validate": handle_validate,
            "pc": handle_pc,
            "compare": handle_compare,
            "rank": handle_rank,
            "criteria": handle_criteria,
            "bounds": handle_bounds,
            "improve": handle_improve,
            "gen": handle_gen,
            "subdesigns": handle_subdesigns,
            "config": handle_config,
        }

    def setup_logging(self, debug: bool) -> None:
        level = logging.DEBUG if debug or self.config.debug_mode else logging.WARNING
        root = logging.getLogger("latmaj")
        root.handlers = [RichHandler(console=self.ui.err_console, show_path=False)]
        root.setLevel(level)

    def run(self, argv: list[str] | None = None) -> int:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as e:
            return int(e.code or 0)

        self.setup_logging(args.debug)
        handler = self.cmd_handlers[args.command]
        try:
            return handler(self, args)
        except (LatmajError, OSError) as e:
            self.ui.print_error(f"Erreur: {e}")
            return 1
        except KeyboardInterrupt:
            self.ui.print_warning("\nInterruption détectée.")
            return 130


def main(argv: list[str] | None = None) -> int:
    """Point d'entrée de l'application"""
    app = LatmajApp()
    return app.run(argv)


if __name__ == "__main__":
    sys.exit(main())
