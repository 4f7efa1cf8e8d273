#!/usr/bin/env python3
"""
Módulo RunLogger - Sistema de logging para ejecuciones de la línea de comandos
Guarda las trazas de cada algoritmo en CSV y un resumen final en JSON
"""

import csv
import json
import os
from datetime import datetime
from typing import Any, Dict, List, Optional

from config import DECIMAL_DIGITS, DECIMAL_PRECISION, OUTPUT_DIR


class RunLogger:
    """
    Logger de una ejecución: una carpeta por comando con sus trazas CSV
    """

    def __init__(self, command: str, output_base: str = OUTPUT_DIR):
        """
        Inicializa el logger de la ejecución

        Args:
            command: Nombre del comando (prefijo del id de ejecución)
            output_base: Carpeta base de salida
        """
        self.command = command
        self.started = datetime.now()
        self.run_id = self._generate_run_id()
        self.output_dir = self._create_output_directory(output_base)
        self.traces: Dict[str, TraceLogger] = {}

    def _generate_run_id(self) -> str:
        """Genera un ID único para la ejecución basado en fecha y hora"""
        return f"{self.command}_{self.started.strftime('%d%m%Y_%H%M%S')}"

    def _create_output_directory(self, output_base: str) -> str:
        run_dir = os.path.join(output_base, self.run_id)
        os.makedirs(run_dir, exist_ok=True)
        return run_dir

    def register_trace(self, name: str, headers: List[str]) -> "TraceLogger":
        """Registra una traza; se escribe como <name>.csv al finalizar"""
        trace = TraceLogger(name, headers, self.output_dir)
        self.traces[name] = trace
        return trace

    def store_row(self, name: str, row: Dict[str, Any]):
        """Almacena una fila en memoria (no escribe al CSV aún)"""
        if name in self.traces:
            self.traces[name].store_row(row)

    def finalize(self, summary: Optional[Dict[str, Any]] = None) -> str:
        """
        Escribe todas las trazas y el resumen de la ejecución

        Returns:
            str: Ruta del archivo de resumen
        """
        for trace in self.traces.values():
            trace.finalize()

        summary_path = os.path.join(self.output_dir, "resumen.json")
        document = {
            "ejecucion": {
                "id": self.run_id,
                "comando": self.command,
                "fecha_inicio": self.started.isoformat(),
                "fecha_fin": datetime.now().isoformat(),
                "configuracion": {
                    "digitos_decimales": DECIMAL_DIGITS,
                    "precision_decimal": DECIMAL_PRECISION,
                },
            },
            "trazas": {name: trace.row_count for name, trace in self.traces.items()},
            "resultados": summary or {},
        }
        with open(summary_path, "w", encoding="utf-8") as f:
            json.dump(document, f, indent=2, ensure_ascii=False)
        return summary_path


class TraceLogger:
    """
    Traza individual: filas en memoria hasta finalizar
    """

    def __init__(self, name: str, headers: List[str], output_dir: str):
        self.name = name
        self.headers = headers
        self.csv_file_path = os.path.join(output_dir, f"{name}.csv")
        self.rows: List[Dict[str, Any]] = []

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def store_row(self, row: Dict[str, Any]):
        self.rows.append(row)

    def finalize(self):
        """Escribe todas las filas almacenadas al CSV"""
        if not self.rows:
            return
        with open(self.csv_file_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=self.headers, extrasaction="ignore")
            writer.writeheader()
            for row in self.rows:
                writer.writerow(row)
