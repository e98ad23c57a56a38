#!/usr/bin/env python3
"""
Module de configuration pour latmaj
Gestion des paramètres via fichier JSON et variables d'environnement
"""

import json
import logging
import os
from pathlib import Path

from dotenv import load_dotenv
from platformdirs import user_config_dir

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    "threads": None,
    "default_kernel": "quadratic",
    "disc_a": "0.25",
    "disc_b": "0",
    "max_iters_factor": 10,
    "display_decimals": 4,
    "json_digits": 12,
    "debug_mode": False,
}


class Config:
    """Classe de configuration pour l'application latmaj"""

    def __init__(self, config_dir: str | Path | None = None):
        """Initialiser la configuration"""
        load_dotenv()
        # Répertoire de configuration global
        if config_dir is None:
            config_dir = os.environ.get("LATMAJ_CONFIG_DIR") or user_config_dir("latmaj")
        self.global_config_dir = Path(config_dir)
        self.config_file = self.global_config_dir / "config.json"

        try:
            self.global_config_dir.mkdir(exist_ok=True, parents=True)
            # Créer le fichier config s'il n'existe pas
            if not self.config_file.exists():
                self._create_default_config()
        except OSError as e:
            logger.warning("Configuration en mémoire (%s): %s", self.global_config_dir, e)

        self._config = self._load_config()

    def _create_default_config(self):
        """Créer une configuration par défaut"""
        with open(self.config_file, "w", encoding="utf-8") as f:
            json.dump(DEFAULT_CONFIG, f, indent=4)

    def _load_config(self) -> dict:
        """Charger la configuration depuis le fichier JSON"""
        try:
            with open(self.config_file, "r", encoding="utf-8") as f:
                return {**DEFAULT_CONFIG, **json.load(f)}
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("Erreur lors du chargement de la configuration: %s", e)
            return dict(DEFAULT_CONFIG)

    @property
    def threads(self) -> int:
        """Parallélisme maximal: LATMAJ_THREADS, puis config, puis tous les cœurs"""
        env = os.environ.get("LATMAJ_THREADS")
        if env:
            try:
                return max(1, int(env))
            except ValueError:
                logger.warning("LATMAJ_THREADS invalide: %r", env)
        value = self._config.get("threads")
        if value:
            return max(1, int(value))
        return os.cpu_count() or 1

    @property
    def default_kernel(self) -> str:
        return self._config.get("default_kernel", "quadratic")

    @property
    def disc_a(self) -> str:
        return str(self._config.get("disc_a", "0.25"))

    @property
    def disc_b(self) -> str:
        return str(self._config.get("disc_b", "0"))

    @property
    def max_iters_factor(self) -> int:
        return self._config.get("max_iters_factor", 10)

    @property
    def display_decimals(self) -> int:
        return self._config.get("display_decimals", 4)

    @property
    def json_digits(self) -> int:
        return self._config.get("json_digits", 12)

    @property
    def debug_mode(self) -> bool:
        return self._config.get("debug_mode", False)

    def validate(self) -> tuple[bool, list[str]]:
        """Valider la configuration"""
        errors = []

        if self.max_iters_factor < 0:
            errors.append("max_iters_factor doit être positif ou nul")

        if not 0 <= self.display_decimals <= 15:
            errors.append("display_decimals doit être entre 0 et 15")

        if not 1 <= self.json_digits <= 17:
            errors.append("json_digits doit être entre 1 et 17")

        threads = self._config.get("threads")
        if threads is not None and (not isinstance(threads, int) or threads < 1):
            errors.append("threads doit être un entier >= 1 ou null")

        return len(errors) == 0, errors

    def print_config(self, ui) -> None:
        """Affiche la configuration via l'UI"""
        ui.print_info("⚙️ Configuration latmaj")
        ui.print_info(f"Fichier: {self.config_file}")
        ui.print_info(f"Threads: {self.threads}")
        ui.print_info(f"Noyau par défaut: {self.default_kernel}")
        ui.print_info(f"Discrépance catégorielle: a={self.disc_a}, b={self.disc_b}")
        ui.print_info(f"Plafond d'itérations: {self.max_iters_factor}·n·s")
        ui.print_info(f"Décimales affichées: {self.display_decimals}")
        ui.print_info(f"Chiffres significatifs JSON: {self.json_digits}")
        ui.print_info(f"Debug mode: {'activé' if self.debug_mode else 'désactivé'}")


config = Config()
