#!/usr/bin/env python3
"""
Console Formatter - Impresión de consola de los reportes de la línea de comandos
Racionales exactos con su aproximación decimal, equilibrios y tablas
"""

import sys
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional

from equilibrium import EquilibriumProfile
from model import format_decimal, format_rational, is_infinite

ANSI = {
    "reset": "\033[0m",
    "bold": "\033[1m",
    "dim": "\033[2m",
    "red": "\033[91m",
    "green": "\033[92m",
    "yellow": "\033[93m",
    "blue": "\033[94m",
    "cyan": "\033[96m",
}

# Nivel del mensaje -> (icono por defecto, color)
LEVELS = {
    "info": ("ℹ️", "blue"),
    "success": ("✅", "green"),
    "warning": ("⚠️", "yellow"),
    "error": ("❌", "red"),
}


class ConsoleFormatter:
    """Reportes de consola con colores ANSI (desactivados fuera de una terminal)"""

    def __init__(self, use_colors: bool = True, show_timestamps: bool = False, width: int = 60):
        """
        Args:
            use_colors: Colorear la salida cuando stdout es una terminal
            show_timestamps: Anteponer la hora a cada línea
            width: Ancho de encabezados y separadores
        """
        self.use_colors = use_colors and sys.stdout.isatty()
        self.show_timestamps = show_timestamps
        self.width = width

    def paint(self, text: str, style: str) -> str:
        if not self.use_colors or style not in ANSI:
            return text
        return f"{ANSI[style]}{text}{ANSI['reset']}"

    def _emit(self, lines: Iterable[str], blank_before: bool = False):
        prefix = f"[{datetime.now():%H:%M:%S}] " if self.show_timestamps else ""
        if blank_before:
            print()
        for line in lines:
            print(prefix + line)

    def _message(self, level: str, message: str, icon: Optional[str]):
        default_icon, color = LEVELS[level]
        self._emit([self.paint(f"{icon or default_icon} {message}", color)])

    # -------------------------------------------------------------------------
    # Encabezados y mensajes
    # -------------------------------------------------------------------------

    def header(self, title: str, char: str = "=") -> None:
        self._emit([self.paint(title, "bold"), char * self.width], blank_before=True)

    def subheader(self, title: str) -> None:
        self._emit([self.paint(title, "cyan"), "-" * len(title)], blank_before=True)

    def info(self, message: str, icon: Optional[str] = None) -> None:
        self._message("info", message, icon)

    def success(self, message: str, icon: Optional[str] = None) -> None:
        self._message("success", message, icon)

    def warning(self, message: str, icon: Optional[str] = None) -> None:
        self._message("warning", message, icon)

    def error(self, message: str, icon: Optional[str] = None) -> None:
        self._message("error", message, icon)

    # -------------------------------------------------------------------------
    # Valores del dominio
    # -------------------------------------------------------------------------

    def value_line(self, label: str, value: Fraction, icon: str = "📈") -> None:
        """Imprime un racional exacto junto a su valor decimal"""
        approx = self.paint(f"≈ {format_decimal(value)}", "dim")
        self._emit([f"{icon} {self.paint(label, 'bold')}: {format_rational(value)} {approx}"])

    def equilibrium_summary(self, profile: EquilibriumProfile) -> None:
        """
        Imprime el orden π con k y, por enlace, su punto de quiebre θ* y su
        tiempo de viaje esperado
        """
        order = " → ".join(f"e{i + 1}" for i in profile.order)
        lines = [f"🚦 {self.paint('Orden π', 'bold')}: {order} | k = {profile.k}"]
        for theta, i in zip(profile.breakpoints, profile.order):
            theta_text = str(theta) if is_infinite(theta) else format_rational(theta)
            tt = self.paint(f"τ̃ = {format_rational(profile.effective_tt[i])}", "dim")
            lines.append(f"  └─ e{i + 1}: θ* = {theta_text} | {tt}")
        self._emit(lines)

    def table(self, rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> None:
        if not rows:
            return
        columns = columns or list(rows[0])
        cells = [[str(row.get(c, "")) for c in columns] for row in rows]
        widths = [max(len(c), *(len(r[j]) for r in cells)) for j, c in enumerate(columns)]

        def render(values: List[str]) -> str:
            return "  ".join(v.ljust(w) for v, w in zip(values, widths))

        self._emit([self.paint(render(columns), "bold"), *(render(r) for r in cells)])

    def list_items(self, items: List[str], title: str, icon: str = "•") -> None:
        self._emit([f"{self.paint(title, 'bold')}:", *(f"  {icon} {item}" for item in items)])

    def progress_bar(self, current: int, total: int, width: int = 30) -> None:
        share = current / total
        filled = int(share * width)
        bar = self.paint("█" * filled + "░" * (width - filled), "green")
        self._emit([f"Progreso: [{bar}] {share:.1%} ({current}/{total})"])

    def separator(self, char: str = "─", length: Optional[int] = None) -> None:
        self._emit([char * (length or self.width)])


# Instancia global usada por main.py
console = ConsoleFormatter()
