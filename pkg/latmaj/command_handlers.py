"""Handlers de commande pour latmaj"""

import math
from fractions import Fraction

from latmaj.classical_criteria import (
    DiscrepancyParams,
    L2Kind,
    ave_chi2_bound,
    categorical_bound,
    l2_bound,
    l2_kinds,
    pattern_benchmarks,
)
from latmaj.construction import TiePolicy, descend, restarted_search
from latmaj.design_core import (
    Design,
    bundled_design,
    equidistance_class,
    format_design,
    pc_vector,
    projections,
    random_balanced,
    read_design,
    write_design,
)
from latmaj.errors import InvalidParameterError, MixedParametersError
from latmaj.majorization import RelationTag, benchmark_pc, compare_pc
from latmaj.reports import (
    criterion_report,
    dumps,
    emit_cumsum_profile,
    format_number,
    rank_pool,
    write_trace,
)
from latmaj.schur_criteria import parse_kernel_spec, psi_lower_bound

RELATION_TEXT = {
    RelationTag.EQUAL: "égaux comme multiensembles",
    RelationTag.LEFT_STRICT: "gauche strictement majorisé par droite",
    RelationTag.RIGHT_STRICT: "droite strictement majorisé par gauche",
    RelationTag.INCOMPARABLE: "incomparables",
}


def load_design(source: str, q: int | None = None) -> Design:
    """Fichier de plan, ou '@table1' / '@table3' pour les plans fournis"""
    if source.startswith("@"):
        return bundled_design(source[1:])
    return read_design(source, q=q)


def _decimal(text: str, option: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidParameterError(f"{option}: nombre décimal attendu ({text!r})") from None


def _num(app, value) -> str | None:
    return format_number(value, app.config.json_digits)


def handle_validate(app, args) -> int:
    d = load_design(args.file, args.q)
    app.ui.show_design_summary(d.name, d.params, equidistance_class(d).value)
    app.ui.print_success("Plan valide et équilibré")
    return 0


def handle_pc(app, args) -> int:
    d = load_design(args.file)
    pc = pc_vector(d)
    bench = benchmark_pc(d.n, d.s, d.q)
    summary = {
        "name": d.name,
        "m": pc.m,
        "sum": pc.sum,
        "beta_bar": str(bench.bar),
        "theta": bench.theta,
        "frac": str(bench.frac),
        "equidistance": equidistance_class(pc).value,
    }
    profile = emit_cumsum_profile(d) if args.profile else None

    if args.json:
        payload = dict(summary, pc=pc.values.tolist(), counts=pc.counts().tolist(),
                       beta_bar_decimal=_num(app, bench.bar))
        if profile is not None:
            payload["profile"] = [{"k": k, "design": a, "benchmark": b} for k, a, b in profile]
        app.ui.print_raw(dumps(payload))
        return 0

    app.ui.show_pc_summary(summary, pc.counts().tolist())
    if profile is not None:
        app.ui.show_profile(profile)
    return 0


def handle_compare(app, args) -> int:
    left, right = load_design(args.left), load_design(args.right)
    relation = compare_pc(pc_vector(left), pc_vector(right))
    if args.json:
        app.ui.print_raw(dumps({
            "left": left.name,
            "right": right.name,
            "relation": relation.tag.value,
            "witness": relation.witness,
        }))
        return 0

    text = RELATION_TEXT[relation.tag]
    if relation.witness is not None:
        text += f" (témoin k={relation.witness})"
    app.ui.print_info(f"{left.name} vs {right.name}: {text}")
    return 0


def _pool(args) -> tuple[list[Design], list[str]]:
    if args.choose is not None:
        if len(args.files) != 1:
            raise InvalidParameterError("--choose attend un seul fichier")
        d = load_design(args.files[0])
        pool = [sub for _, sub in projections(d, args.choose)]
    else:
        pool = [load_design(path) for path in args.files]
        for index, d in enumerate(pool):
            if d.params != pool[0].params:
                raise MixedParametersError(pool[0].params, d.params, index)
    return pool, [d.name for d in pool]


def handle_rank(app, args) -> int:
    kernel = parse_kernel_spec(args.kernel or app.config.default_kernel)
    pool, names = _pool(args)
    ranking = rank_pool(pool, kernel, app.config.threads)
    classification = ranking.classification
    n, s, q = pool[0].params
    bound = psi_lower_bound(n, s, q, kernel)

    if args.json:
        app.ui.print_raw(dumps({
            "kernel": kernel.label,
            "pool_size": len(pool),
            "bound": _num(app, bound),
            "admissible": [names[i] for i in classification.admissible],
            "inadmissible": [{"design": names[i], "dominated_by": names[j]}
                             for i, j in classification.inadmissible],
            "majorants": [names[i] for i in classification.majorants],
            "ranking": [{"rank": r.rank, "design": names[r.index], "value": _num(app, r.value.value)}
                        for r in ranking.ranked],
        }))
        return 0

    app.ui.print_info(f"{len(pool)} plans, {len(classification.admissible)} admissibles")
    for i, j in classification.inadmissible:
        app.ui.print_info(f"  inadmissible: {names[i]} (dominé par {names[j]})")
    if classification.majorants:
        app.ui.print_success("Majorant: " + ", ".join(names[i] for i in classification.majorants))
    else:
        app.ui.print_info("Aucun plan majorant")
    app.ui.show_ranking(
        f"Classement des admissibles, noyau {kernel.label} (borne {app.ui.fmt(bound)})",
        [(r.rank, names[r.index], app.ui.fmt(r.value.value), app.ui.fmt(r.value.gap))
         for r in ranking.ranked],
    )
    return 0


def _disc_params(app, args, q: int) -> DiscrepancyParams:
    a = _decimal(args.disc_a or app.config.disc_a, "--disc-a")
    b = _decimal(args.disc_b or app.config.disc_b, "--disc-b")
    return DiscrepancyParams(a, b, q)


def handle_criteria(app, args) -> int:
    d = load_design(args.file)
    kernels = [parse_kernel_spec(spec) for spec in (args.kernel or [app.config.default_kernel])]
    report = criterion_report(d, kernels, _disc_params(app, args, d.q))
    payload = report.to_json(app.config.json_digits)
    if args.json:
        app.ui.print_raw(dumps(payload))
    else:
        app.ui.show_criteria(payload)
    return 0


def handle_bounds(app, args) -> int:
    kernel = parse_kernel_spec(args.kernel or app.config.default_kernel)
    n, s, q = args.n, args.s, args.q
    bound = psi_lower_bound(n, s, q, kernel)
    bench = benchmark_pc(n, s, q)
    patterns = pattern_benchmarks(n, s, q)
    params = _disc_params(app, args, q)
    payload = {
        "n": n, "s": s, "q": q,
        "kernel": kernel.label,
        "bound": _num(app, bound),
        "m": bench.m,
        "beta_bar": str(bench.bar),
        "theta": bench.theta,
        "frac": str(bench.frac),
        "astar": [_num(app, v) for v in patterns.Astar],
        "bstar": [_num(app, v) for v in patterns.Bstar],
        "ave_chi2_bound": _num(app, ave_chi2_bound(n, s, q)) if s >= 2 else None,
        "categorical_d2_bound": _num(app, categorical_bound(n, s, params)),
    }
    for kind in L2Kind:
        payload[f"{kind.value}_bound"] = (
            _num(app, l2_bound(n, s, q, kind)) if kind in l2_kinds(q) else None
        )

    if args.json:
        app.ui.print_raw(dumps(payload))
        return 0
    app.ui.print_info(f"Borne ({kernel.label}): {app.ui.fmt(bound)}")
    app.ui.print_info(
        f"β̄ = {bench.bar} ≈ {app.ui.fmt(bench.bar)}, θ = {bench.theta}, f = {bench.frac}, m = {bench.m}"
    )
    return 0


def handle_improve(app, args) -> int:
    kernel = parse_kernel_spec(args.kernel or app.config.default_kernel)
    d = load_design(args.file)
    policy = TiePolicy(args.tie_policy)

    with app.ui.show_processing():
        trace = descend(d, kernel, args.max_iters, policy, args.seed)
        origin = "plan fourni"
        if args.restarts:
            result = restarted_search(d.n, d.s, d.q, kernel, args.restarts, args.max_iters,
                                      args.seed, policy, app.config.threads)
            if result.best.final_psi < trace.final_psi:
                trace = result.best
                origin = f"redémarrage {result.best_index + 1}/{args.restarts}"

    if args.out:
        write_design(args.out, trace.design)
    else:
        app.ui.print_raw(format_design(trace.design))
    if args.trace:
        write_trace(args.trace, trace, app.config.json_digits)

    if args.out:
        app.ui.show_descent([
            ("Origine", origin),
            ("Ψ initial", app.ui.fmt(trace.initial_psi)),
            ("Ψ final", app.ui.fmt(trace.final_psi)),
            ("Borne", app.ui.fmt(trace.bound)),
            ("Échanges", str(trace.iterations)),
            ("Arrêt", trace.terminated.value),
        ])
        app.ui.print_success(f"Plan amélioré écrit dans {args.out}")
    return 0


def handle_gen(app, args) -> int:
    d = random_balanced(args.n, args.s, args.q, args.seed)
    if args.out:
        write_design(args.out, d)
        app.ui.print_success(f"Plan U({d.n}, {d.q}^{d.s}) écrit dans {args.out}")
    else:
        app.ui.print_raw(format_design(d))
    return 0


def handle_subdesigns(app, args) -> int:
    d = load_design(args.file)
    subsets = list(projections(d, args.choose))
    if args.json:
        app.ui.print_raw(dumps({
            "count": len(subsets),
            "subsets": [{"design": sub.name, "columns": [c + 1 for c in cols]} for cols, sub in subsets],
        }))
        return 0

    app.ui.print_info(f"{len(subsets)} sous-plans à {args.choose} colonnes (C({d.s}, {args.choose}) = "
                      f"{math.comb(d.s, args.choose)})")
    if args.list:
        app.ui.show_subdesigns([
            (sub.name, " ".join(str(c + 1) for c in cols), equidistance_class(sub).value)
            for cols, sub in subsets
        ])
    return 0


def handle_config(app, args) -> int:
    app.config.print_config(app.ui)
    is_valid, errors = app.config.validate()
    if not is_valid:
        for error in errors:
            app.ui.print_warning(f"  - {error}")
        return 1
    return 0
