#!/usr/bin/env python3
"""
Module d'interface utilisateur pour latmaj
Affichage des plans, relations, classements et critères dans le terminal
"""

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from latmaj.reports import format_fixed


class LatmajUI:
    """Interface utilisateur pour l'application latmaj"""

    def __init__(self, decimals: int = 4):
        self.console = Console(highlight=False)
        self.err_console = Console(stderr=True, highlight=False)
        self.decimals = decimals

    def fmt(self, value) -> str:
        return format_fixed(value, self.decimals)

    def print_success(self, message: str) -> None:
        """Afficher un message de succès"""
        self.console.print(f"[green]{message}[/green]")

    def print_error(self, message: str) -> None:
        """Afficher un message d'erreur"""
        self.err_console.print(f"[red]{message}[/red]")

    def print_warning(self, message: str) -> None:
        """Afficher un avertissement"""
        self.err_console.print(f"[yellow]{message}[/yellow]")

    def print_info(self, message: str) -> None:
        """Afficher une information"""
        self.console.print(message)

    def print_raw(self, text: str) -> None:
        """Texte brut sans balisage rich (JSON, fichiers de plan)"""
        self.console.file.write(text if text.endswith("\n") else text + "\n")

    def show_processing(self, message: str = "Recherche en cours..."):
        """Afficher un indicateur de traitement"""
        return self.console.status(f"[bold green]{message}")

    def show_design_summary(self, name: str, params: tuple[int, int, int], equidistance: str) -> None:
        n, s, q = params
        self.console.print(
            Panel(
                f"U({n}, {q}^{s}): {n} essais, {s} facteurs à {q} niveaux\nClasse: {equidistance}",
                title=name,
                border_style="blue",
            )
        )

    def show_pc_summary(self, summary: dict, counts: list[int]) -> None:
        """Résumé du vecteur de coïncidences et histogramme des valeurs"""
        table = Table(title=f"Coïncidences par paires ({summary['name']})")
        table.add_column("Quantité", style="cyan")
        table.add_column("Valeur", justify="right")
        for key in ("m", "sum", "beta_bar", "theta", "frac", "equidistance"):
            table.add_row(key, str(summary[key]))
        self.console.print(table)

        histogram = Table(title="Effectifs par valeur de β")
        histogram.add_column("β", justify="right", style="cyan")
        histogram.add_column("Paires", justify="right")
        for value, count in enumerate(counts):
            if count:
                histogram.add_row(str(value), str(count))
        self.console.print(histogram)

    def show_profile(self, rows: list[tuple[int, int, int]]) -> None:
        table = Table(title="Profil cumulé (vecteur trié / référence β̃)")
        table.add_column("k", justify="right", style="cyan")
        table.add_column("Plan", justify="right")
        table.add_column("Référence", justify="right", style="dim")
        for k, design, bench in rows:
            table.add_row(str(k), str(design), str(bench))
        self.console.print(table)

    def show_ranking(self, title: str, rows: list[tuple[int, str, str, str]]) -> None:
        """Lignes (rang, plan, Ψ, écart à la borne)"""
        if not rows:
            self.print_warning("Aucun plan admissible.")
            return
        table = Table(title=title)
        table.add_column("Rang", justify="right", style="cyan")
        table.add_column("Plan", style="green")
        table.add_column("Ψ", justify="right")
        table.add_column("Écart", justify="right", style="dim")
        for rank, name, value, gap in rows:
            table.add_row(str(rank), name, value, gap)
        self.console.print(table)

    def show_criteria(self, payload: dict) -> None:
        """Rapport de critères (valeurs et bornes)"""
        design = payload["design"]
        self.show_design_summary(design["name"], (design["n"], design["s"], design["q"]),
                                 payload["equidistance"])

        patterns = Table(title="Motifs par ordre j")
        patterns.add_column("j", justify="right", style="cyan")
        patterns.add_column("A_j", justify="right")
        patterns.add_column("A*_j", justify="right", style="dim")
        patterns.add_column("B_j", justify="right")
        patterns.add_column("B*_j", justify="right", style="dim")
        patterns.add_column("Ψ_C", justify="right")
        columns = zip(payload["gwp"]["values"], payload["gwp"]["bound"],
                      payload["deviation"]["values"], payload["deviation"]["bound"],
                      payload["psi_c"]["values"])
        for j, row in enumerate(columns, 1):
            patterns.add_row(str(j), *(self.fmt(v) for v in row))
        self.console.print(patterns)

        table = Table(title="Critères")
        table.add_column("Critère", style="cyan")
        table.add_column("Valeur", justify="right")
        table.add_column("Borne", justify="right", style="dim")
        for key, label in (("ave_chi2", "Ave(χ²)"), ("e_s2", "E(s²)")):
            item = payload[key]
            if item is not None:
                table.add_row(label, self.fmt(item["value"]), self.fmt(item["bound"]))
        for key, label in (("categorical_d2", "D² catégorielle"), ("cl2", "CL2²"), ("wl2", "WL2²")):
            item = payload[key]
            if item is not None:
                table.add_row(label, self.fmt(item["squared"]), self.fmt(item["bound_squared"]))
        for item in payload["schur"]:
            table.add_row(f"Ψ {item['kernel']}", self.fmt(item["value"]), self.fmt(item["bound"]))
        self.console.print(table)

    def show_subdesigns(self, rows: list[tuple[str, str, str]]) -> None:
        table = Table(title="Sous-plans")
        table.add_column("Plan", style="green")
        table.add_column("Colonnes", style="cyan")
        table.add_column("Classe", style="dim")
        for row in rows:
            table.add_row(*row)
        self.console.print(table)

    def show_descent(self, rows: list[tuple[str, str]]) -> None:
        table = Table(title="Amélioration par échanges")
        table.add_column("Quantité", style="cyan")
        table.add_column("Valeur", justify="right")
        for key, value in rows:
            table.add_row(key, value)
        self.console.print(table)
