#!/usr/bin/env python3
"""
Señalización pública óptima en colas de Vickrey paralelas
Línea de comandos: evaluación, barridos, FPTAS, PTAS dual y verificaciones
"""

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from config import (DEFAULT_EPS, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TRIALS, ELLIPSOID_FLOAT_SLACK, EXIT_INPUT_ERROR,
                    EXIT_OK, EXIT_PROPERTY_VIOLATION, OUTPUT_DIR, RANDOM_SIGNALS)
from console_formatter import console
from dualptas import solve_additive_ptas
from equilibrium import solve_for_belief
from figures import header_lines, sweep_table, write_csv, write_html, write_svg
from fptas import solve_fptas
from model import (Instance, InstanceError, SignalingError, SignalingScheme, format_decimal, format_rational,
                   load_instance, parse_belief, parse_rational, parse_scheme, random_instance, scheme_to_document)
from objectives import (full_information_makespan, makespan_breakdown, scheme_makespan, scheme_throughput,
                        throughput_breakdown)
from run_logger import RunLogger


# =============================================================================
# Comandos
# =============================================================================

def cmd_evaluate(args) -> int:
    inst = load_instance(args.instance)
    belief = parse_belief(args.belief, inst.d) if args.belief else inst.prior_belief
    console.header(f"📊 Evaluación de {args.objective} en μ = {belief}")
    console.equilibrium_summary(solve_for_belief(inst, belief))

    console.subheader("Por escenario")
    if args.objective == "makespan":
        breakdown = makespan_breakdown(inst, belief)
        console.info(f"Soporte en T: {', '.join(f'e{i + 1}' for i in breakdown.support)}")
        for s, value in enumerate(breakdown.scenarios):
            console.value_line(f"M_T,{s + 1}", value, icon="⏱️")
    else:
        breakdown = throughput_breakdown(inst, belief)
        for scenario in breakdown.scenarios:
            console.value_line(f"F_{scenario.scenario + 1}", scenario.value, icon="🚗")
    console.separator()
    console.value_line("Valor esperado", breakdown.expected)
    return EXIT_OK


def cmd_sweep(args) -> int:
    inst = load_instance(args.instance)
    logger = RunLogger("sweep", args.output_dir)
    console.header(f"📈 Barrido de {args.objective} con n = {args.samples}")
    df, pw = sweep_table(inst, args.objective, args.samples)
    header = header_lines(inst, args.objective, args.samples)

    base = args.output or os.path.join(logger.output_dir, "sweep")
    base = os.path.splitext(base)[0]
    written = [f"{base}.csv"]
    write_csv(df, written[0], header)
    if args.emit == "svg":
        written.append(f"{base}.svg")
        write_svg(df, written[-1], header)
    elif args.emit == "html":
        written.append(f"{base}.html")
        write_html(df, written[-1], f"{args.objective} en función de μ_2")

    console.list_items([format_rational(x) for x in pw.interior_breakpoints], "Puntos de quiebre")
    if pw.discontinuities:
        console.list_items([format_rational(x) for x in pw.discontinuities], "Saltos", icon="⚡")
    logger.finalize({
        "objetivo": args.objective,
        "filas": len(df),
        "puntos_quiebre": [format_rational(x) for x in pw.interior_breakpoints],
        "saltos": [format_rational(x) for x in pw.discontinuities],
        "archivos": written,
    })
    for path in written:
        console.success(f"Archivo escrito: {path}")
    return EXIT_OK


def _verify_scheme_file(inst: Instance, path: str) -> List[str]:
    with open(path, "r", encoding="utf-8") as f:
        scheme, value = parse_scheme(f.read())
    problems = scheme.check(inst)
    if value is not None and not problems:
        actual = scheme_throughput(inst, scheme)
        if actual != value:
            problems.append(f"ALG declarado {format_rational(value)} ≠ recalculado {format_rational(actual)}")
    return problems


def cmd_fptas(args) -> int:
    inst = load_instance(args.instance)
    eps = parse_rational(args.eps, "eps")
    logger = RunLogger("fptas", args.output_dir)
    logger.register_trace("net", ["belief", "F_eps_kappa", "alpha"])

    console.header(f"🎯 FPTAS con ε* = {format_rational(eps)}")
    result = solve_fptas(inst, eps, trace=lambda row: logger.store_row("net", row))
    if result.trivial:
        console.warning("Caso trivial: el esquema sin información es óptimo")
    else:
        console.info(f"κ = {result.net.kappa}, {len(result.net.points)} puntos en la red")

    console.table([{"α": format_rational(alpha), "μ": str(belief)} for alpha, belief in result.scheme.signals])
    console.value_line("ALG", result.value)
    console.value_line("Subestimador", result.relaxed_value, icon="📉")

    path = args.output or os.path.join(logger.output_dir, "scheme.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(scheme_to_document(result.scheme, result.value), f, indent=2, ensure_ascii=False)
    console.success(f"Esquema guardado en: {path}")

    code = EXIT_OK
    if args.verify:
        problems = _verify_scheme_file(inst, path)
        if problems:
            console.list_items(problems, "Verificación fallida", icon="❌")
            code = EXIT_PROPERTY_VIOLATION
        else:
            console.success("Σα = 1 y Σαμ = λ* verificados exactamente")

    logger.finalize({
        "eps": format_rational(eps),
        "alg": format_rational(result.value),
        "senales": len(result.scheme.signals),
        "trivial": result.trivial,
    })
    return code


def cmd_dual(args) -> int:
    inst = load_instance(args.instance)
    eps = parse_rational(args.eps, "eps")
    logger = RunLogger("dual", args.output_dir)
    logger.register_trace("ellipsoid", ["iteracion", "corte", "objetivo", "log_volumen", "veredicto"])

    console.header(f"🥚 PTAS aditivo con ε* = {format_rational(eps)}")
    result = solve_additive_ptas(inst, float(eps), trace=lambda row: logger.store_row("ellipsoid", row))
    console.info(f"Iteraciones: {result.iterations}")
    if result.best_w is not None:
        console.info(f"Mejor w factible: [{', '.join(f'{v:.6g}' for v in result.best_w)}]")
    console.info(f"p = {result.p:.12g}  (intervalo [OPT − ε*, OPT] salvo holgura {ELLIPSOID_FLOAT_SLACK:g})")
    console.info(f"Cota inferior certificada del dual: {result.lower_bound:.12g}")
    if result.converged:
        console.success("Precisión certificada")
    else:
        console.warning("Presupuesto de iteraciones agotado sin certificar la precisión")
    if result.drift_warnings:
        console.warning(f"{result.drift_warnings} iteraciones con desvío del factor de volumen")

    logger.finalize({
        "eps": format_rational(eps),
        "p": result.p,
        "iteraciones": result.iterations,
        "convergio": result.converged,
        "cota_inferior": result.lower_bound,
    })
    return EXIT_OK


def cmd_makespan_check(args) -> int:
    if args.trials < 1:
        raise InstanceError("trials: se requiere al menos un esquema")
    base = load_instance(args.instance)
    rng = np.random.default_rng(args.seed)
    logger = RunLogger("makespan-check", args.output_dir)
    logger.register_trace("makespan_trials", ["instancia", "prueba", "esquema", "informacion_completa",
                                              "contraejemplo"])

    instances = [base] + [random_instance(rng, 3, base.d) for _ in range(args.instances)]
    console.header(f"⏱️ Información completa frente a {args.trials} esquemas aleatorios")

    counterexamples = 0
    minimum: Optional[Fraction] = None
    for k, inst in enumerate(instances):
        full = full_information_makespan(inst)
        for trial in range(args.trials):
            scheme = SignalingScheme.random(inst.prior_belief, rng, RANDOM_SIGNALS)
            value = scheme_makespan(inst, scheme)
            failed = value < full
            counterexamples += failed
            if k == 0:
                minimum = value if minimum is None else min(minimum, value)
            logger.store_row("makespan_trials", {
                "instancia": k, "prueba": trial + 1, "esquema": format_decimal(value),
                "informacion_completa": format_decimal(full), "contraejemplo": int(failed),
            })
        if k == 0:
            console.value_line("Información completa", full, icon="🟢")
            console.value_line("Mínimo muestreado", minimum, icon="🔎")
        console.progress_bar(k + 1, len(instances))

    logger.finalize({
        "instancias": len(instances),
        "pruebas_por_instancia": args.trials,
        "contraejemplos": counterexamples,
    })
    if counterexamples:
        console.error(f"{counterexamples} esquemas con makespan menor que la información completa")
        return EXIT_PROPERTY_VIOLATION
    console.success("Ningún esquema mejora a la información completa")
    return EXIT_OK


def cmd_verify_scheme(args) -> int:
    inst = load_instance(args.instance)
    console.header("🔏 Verificación de esquema")
    problems = _verify_scheme_file(inst, args.scheme)
    if problems:
        console.list_items(problems, "Problemas", icon="❌")
        return EXIT_PROPERTY_VIOLATION
    console.success("Esquema válido para la instancia")
    return EXIT_OK


# =============================================================================
# Argumentos
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="main.py", description="Señalización pública en colas de Vickrey paralelas")
    parser.add_argument("--output-dir", default=OUTPUT_DIR, help="carpeta base de los registros de ejecución")
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("evaluate", help="throughput o makespan esperado en una creencia")
    evaluate.add_argument("instance")
    evaluate.add_argument("--belief", help="creencia 'a,b,...' (por defecto el prior)")
    evaluate.add_argument("--objective", choices=["throughput", "makespan"], default="throughput")
    evaluate.set_defaults(handler=cmd_evaluate)

    sweep = commands.add_parser("sweep", help="barrido de la creencia para d = 2")
    sweep.add_argument("instance")
    sweep.add_argument("--objective", choices=["throughput", "makespan"], default="throughput")
    sweep.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sweep.add_argument("--emit", choices=["csv", "svg", "html"], default="csv")
    sweep.add_argument("--output", help="ruta base de los archivos (sin extensión)")
    sweep.set_defaults(handler=cmd_sweep)

    fptas = commands.add_parser("fptas", help="esquema (1−ε*)-óptimo para el throughput")
    fptas.add_argument("instance")
    fptas.add_argument("--eps", default=DEFAULT_EPS)
    fptas.add_argument("--output", help="ruta del documento de esquema")
    fptas.add_argument("--verify", action="store_true", help="releer el esquema y verificarlo")
    fptas.set_defaults(handler=cmd_fptas)

    dual = commands.add_parser("dual", help="valor p ∈ [OPT − ε*, OPT] por el método del elipsoide")
    dual.add_argument("instance")
    dual.add_argument("--eps", default=DEFAULT_EPS)
    dual.set_defaults(handler=cmd_dual)

    check = commands.add_parser("makespan-check", help="información completa frente a esquemas aleatorios")
    check.add_argument("instance")
    check.add_argument("--trials", "--samples", dest="trials", type=int, default=DEFAULT_TRIALS)
    check.add_argument("--seed", type=int, default=DEFAULT_SEED)
    check.add_argument("--instances", type=int, default=0, help="instancias aleatorias de 3 enlaces adicionales")
    check.set_defaults(handler=cmd_makespan_check)

    verify = commands.add_parser("verify-scheme", help="verifica exactamente un documento de esquema")
    verify.add_argument("instance")
    verify.add_argument("scheme")
    verify.set_defaults(handler=cmd_verify_scheme)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (InstanceError, SignalingError, OSError, ValueError) as e:
        console.error(str(e))
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
