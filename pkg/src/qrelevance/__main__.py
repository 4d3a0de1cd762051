"""
Copyright 2023 Quarkslab

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

# builtin-imports
from __future__ import annotations
import functools
import json
import logging
import sys
from dataclasses import asdict
from typing import TYPE_CHECKING

# Third-party imports
import rich_click as click
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress
from rich.table import Table

# Local imports
from qrelevance import __version__ as qrelevance_version
from qrelevance.cli import (
    certificate_from_json,
    digest,
    dumps,
    format_access,
    parse_access,
    parse_problem,
    print_problem,
    summary_rows,
    verdict_to_json,
)
from qrelevance.exceptions import QRelevanceError
from qrelevance.generators import (
    RandomLimits,
    TilingSpec,
    gen_random_instance,
    gen_tiling_corridor,
    gen_tiling_grid,
)
from qrelevance.model import Path
from qrelevance.oracle import (
    OracleLimits,
    oracle_certain,
    oracle_containment,
    oracle_ir,
    oracle_ltr,
    oracle_reachable,
)
from qrelevance.oracle.differential import CHECKS, compare
from qrelevance.query import certain, classical_contains, evaluate
from qrelevance.reductions import (
    boolean_arity_reduction,
    cm_to_config,
    config_to_cm,
    containment_to_ltr,
    encode_disjunction_as_cq,
    ltr_to_containment,
    ltr_via_containment_cq,
)
from qrelevance.relevance import (
    SearchStats,
    Verdict,
    check_containment_certificate,
    check_ir_certificate,
    check_ltr_certificate,
    decide_ir,
    decide_ltr_independent,
    decide_ltr_single_occurrence,
    ir_rewriting,
)
from qrelevance.types import QueryLanguage
from qrelevance.witness import Budget, decide_containment_bounded, decide_ltr_dependent_bounded

if TYPE_CHECKING:
    from typing import Any, Callable, TextIO
    from qrelevance.model import Access, ProblemInstance


def configure_logging(verbose: int):
    logging.basicConfig(
        format="%(message)s",
        level=logging.INFO,
        handlers=[RichHandler(rich_tracebacks=True, show_time=False)],
    )

    logger = logging.getLogger()
    if verbose >= 2:
        logger.setLevel(logging.DEBUG)
    elif verbose == 1:
        logger.setLevel(logging.INFO)
    else:
        logger.setLevel(logging.WARNING)


def display_summary(payload: dict[str, Any]) -> None:
    console = Console(stderr=True)

    table = Table(show_header=False)
    table.add_column(style="dim")
    table.add_column(justify="right")
    for key, value in summary_rows(payload):
        table.add_row(key, value)

    console.print(table)


CONTEXT_SETTINGS = dict(help_option_names=["-h", "--help"])

DEFAULT_QUERY = "Q"
DEFAULT_Q1 = "Q1"
DEFAULT_Q2 = "Q2"
DEFAULT_ALGORITHM = "auto"
DEFAULT_LANGUAGE = QueryLanguage.pq.name
DEFAULT_RUNS = 100
DEFAULT_SEED = 0
DEFAULT_ORACLE_LIMITS = OracleLimits()
DEFAULT_RANDOM_LIMITS = RandomLimits()

ALGORITHMS = ("auto", "independent", "single", "dependent", "via-containment")
REDUCTIONS = (
    "arity",
    "containment-to-ltr",
    "disjunction-to-cq",
    "ltr-to-containment",
    "config-to-cm",
)
GENERATORS = ("tiling-grid", "tiling-corridor", "random")
ORACLES = ("reachable", "ir", "ltr", "contain", "certain")
LANGUAGES = [x.name for x in QueryLanguage]

# exit codes per result
EXIT_CODES = {"yes": 0, "no": 0, "unknown_within_budget": 1}
INPUT_ERROR = 2

BUDGET_OPTIONS = [
    "--budget-facts",
    "--budget-fresh",
    "--budget-depth",
    "--budget-first-response",
    "--timeout-ms",
    "--chain-heuristic",
    "--deterministic",
]
ORACLE_OPTIONS = [
    "--max-path-length",
    "--max-fresh",
    "--max-response-size",
    "--max-extension-facts",
    "--max-states",
]
RANDOM_OPTIONS = [
    "--seed",
    "--relations",
    "--arity",
    "--domains",
    "--facts",
    "--atoms",
    "--lang",
    "--dependent-ratio",
]
GLOBAL_OPTIONS = ["--admit-query-constants", "--quiet", "--help"]

click.rich_click.SHOW_METAVARS_COLUMN = False
click.rich_click.APPEND_METAVARS_HELP = True
click.rich_click.STYLE_METAVAR_APPEND = "yellow"
click.rich_click.OPTION_GROUPS = {
    "qrelevance ltr": [
        {"name": "Problem options", "options": ["--query", "--access", "--algorithm"]},
        {"name": "Search budget", "options": BUDGET_OPTIONS},
        {"name": "Global options", "options": GLOBAL_OPTIONS},
    ],
    "qrelevance contain": [
        {"name": "Problem options", "options": ["--q1", "--q2"]},
        {"name": "Search budget", "options": BUDGET_OPTIONS},
        {"name": "Global options", "options": GLOBAL_OPTIONS},
    ],
    "qrelevance oracle": [
        {"name": "Problem options", "options": ["--query", "--q1", "--q2", "--access"]},
        {"name": "Oracle limits", "options": ORACLE_OPTIONS},
        {"name": "Global options", "options": GLOBAL_OPTIONS},
    ],
    "qrelevance gen": [
        {
            "name": "Tiling options",
            "options": ["--n", "--tiles", "--h", "--v", "--initial", "--final", "--cq"],
        },
        {"name": "Random instances", "options": RANDOM_OPTIONS},
    ],
    "qrelevance fuzz": [
        {"name": "Campaign", "options": ["--check", "--runs", "--quiet"]},
        {"name": "Random instances", "options": RANDOM_OPTIONS},
        {"name": "Oracle limits", "options": ORACLE_OPTIONS},
    ],
}


def handle_errors(command: Callable[..., int | None]) -> Callable[..., None]:
    """Exit with the code returned by the command, or 2 on invalid input"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            code = command(*args, **kwargs)
        except QRelevanceError as e:
            logging.error(f"[-] {e}")
            sys.exit(INPUT_ERROR)
        sys.exit(code or 0)

    return wrapper


def _apply(options: list[Callable]) -> Callable:
    def decorator(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return decorator


problem_argument = click.argument("problem", type=click.File("r"), metavar="<problem file>")

common_options = _apply(
    [
        click.option(
            "--admit-query-constants",
            is_flag=True,
            help="Admit the constants of the queries in the configuration.",
        ),
        click.option(
            "-q", "--quiet", is_flag=True, help="Do not display the summary on standard error."
        ),
    ]
)

budget_options = _apply(
    [
        click.option("--budget-facts", type=int, help="Extra facts of a witness."),
        click.option("--budget-fresh", type=int, help="Fresh values per domain."),
        click.option("--budget-depth", type=int, help="Depth of the support chains."),
        click.option(
            "--budget-first-response", type=int, help="Facts returned by the first access."
        ),
        click.option("--timeout-ms", type=int, help="Time limit of the search."),
        click.option(
            "--chain-heuristic", is_flag=True, help="Explore chain-shaped witnesses first."
        ),
        click.option(
            "--deterministic",
            is_flag=True,
            help="Byte-identical output for identical inputs (timings are zeroed).",
        ),
    ]
)

oracle_options = _apply(
    [
        click.option(
            "--max-path-length",
            type=int,
            show_default=True,
            default=DEFAULT_ORACLE_LIMITS.max_path_length,
            help="Accesses of an explored path.",
        ),
        click.option(
            "--max-fresh",
            type=int,
            show_default=True,
            default=DEFAULT_ORACLE_LIMITS.max_fresh,
            help="Fresh values per domain.",
        ),
        click.option(
            "--max-response-size",
            type=int,
            show_default=True,
            default=DEFAULT_ORACLE_LIMITS.max_response_size,
            help="Facts of the response to the distinguished access.",
        ),
        click.option(
            "--max-extension-facts",
            type=int,
            show_default=True,
            default=DEFAULT_ORACLE_LIMITS.max_extension_facts,
            help="Facts added to the configuration by the certainty oracle.",
        ),
        click.option(
            "--max-states",
            type=int,
            show_default=True,
            default=DEFAULT_ORACLE_LIMITS.max_states,
            help="Hard cap on the explored states.",
        ),
    ]
)

random_options = _apply(
    [
        click.option("--seed", type=int, show_default=True, default=DEFAULT_SEED, help="Seed."),
        click.option(
            "--relations",
            type=int,
            show_default=True,
            default=DEFAULT_RANDOM_LIMITS.relations,
            help="Maximum number of relations.",
        ),
        click.option(
            "--arity",
            type=int,
            show_default=True,
            default=DEFAULT_RANDOM_LIMITS.arity,
            help="Maximum arity.",
        ),
        click.option(
            "--domains",
            type=int,
            show_default=True,
            default=DEFAULT_RANDOM_LIMITS.domains,
            help="Maximum number of domains.",
        ),
        click.option(
            "--facts",
            type=int,
            show_default=True,
            default=DEFAULT_RANDOM_LIMITS.facts,
            help="Maximum number of facts.",
        ),
        click.option(
            "--atoms",
            type=int,
            show_default=True,
            default=DEFAULT_RANDOM_LIMITS.atoms,
            help="Maximum number of atoms per query.",
        ),
        click.option(
            "--lang",
            type=click.Choice(LANGUAGES),
            show_default=True,
            default=DEFAULT_LANGUAGE,
            help="Query language.",
        ),
        click.option(
            "--dependent-ratio",
            type=float,
            show_default=True,
            default=DEFAULT_RANDOM_LIMITS.dependent_ratio,
            help="Probability of a dependent access method.",
        ),
    ]
)


def load_problem(problem: TextIO, admit_query_constants: bool = False) -> ProblemInstance:
    logging.info(f"[+] Loading problem: {problem.name}")
    return parse_problem(problem.read(), admit_query_constants=admit_query_constants).instance


def resolve_access(inst: ProblemInstance, access: str | None) -> Access:
    if access is not None:
        return parse_access(access, inst.schema)
    if inst.target is None:
        raise QRelevanceError("No access given: use --access or declare a target")
    return inst.target


def make_budget(q, **overrides: Any) -> Budget:
    return Budget.for_query(
        q,
        max_facts=overrides["budget_facts"],
        max_fresh=overrides["budget_fresh"],
        max_depth=overrides["budget_depth"],
        max_first_response=overrides["budget_first_response"],
        time_limit_ms=overrides["timeout_ms"],
        chain_heuristic=overrides["chain_heuristic"] or None,
        deterministic=overrides["deterministic"] or None,
    ).validate()


def emit(payload: dict[str, Any], quiet: bool, deterministic: bool = False) -> int:
    """Print the JSON verdict on standard output and the summary on standard error"""
    if deterministic and payload.get("stats"):
        payload["stats"]["millis"] = 0
    click.echo(dumps(payload))
    if not quiet:
        display_summary(payload)
    return EXIT_CODES.get(payload.get("result"), 0)


def _boolean(command: str, inst: ProblemInstance, value: bool, **extra: Any) -> dict[str, Any]:
    stats = SearchStats()
    verdict = Verdict.yes(None, stats) if value else Verdict.no(stats)
    return verdict_to_json(command, inst, verdict, **extra)


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option(
    "-v",
    "--verbose",
    count=True,
    metavar="-v|-vv",
    help="Activate debugging messages.",
)
@click.version_option(qrelevance_version)
def main(verbose):
    """
        qrelevance decides whether an access to a source with restricted
    access patterns is relevant to a query, and whether a query is contained
    in another under the same restrictions.

        Every command prints a JSON verdict on standard output and exits with
    0 when the question was decided, 1 when the search budget ran out and 2
    on invalid input. A problem file named '-' is read from standard input.

        Examples:

    - Long-term relevance of the declared target access:
    qrelevance ltr problem.alp --query Q

    - Containment of generated tiling instances, read from standard input:
    qrelevance gen tiling-grid --n 1 --tiles 1 | qrelevance contain -
    qrelevance gen tiling-corridor --n 2 --h none | qrelevance contain -
    """

    configure_logging(verbose)


@main.command(name="eval")
@problem_argument
@click.option("--query", default=DEFAULT_QUERY, show_default=True, help="Query name.")
@common_options
@handle_errors
def eval_command(problem, query, admit_query_constants, quiet):
    """Evaluate a query on the configuration of the problem."""

    inst = load_problem(problem, admit_query_constants)
    stats = SearchStats()
    h = evaluate(inst.boolean_query(query), inst.configuration)
    verdict = Verdict.yes(h, stats) if h is not None else Verdict.no(stats)
    return emit(verdict_to_json("eval", inst, verdict, query=query), quiet)


@main.command(name="certain")
@problem_argument
@click.option("--query", default=DEFAULT_QUERY, show_default=True, help="Query name.")
@common_options
@handle_errors
def certain_command(problem, query, admit_query_constants, quiet):
    """Whether a query is certain in the configuration of the problem."""

    inst = load_problem(problem, admit_query_constants)
    value = certain(inst.boolean_query(query), inst.configuration)
    return emit(_boolean("certain", inst, value, query=query), quiet)


@main.command(name="ir")
@problem_argument
@click.option("--query", default=DEFAULT_QUERY, show_default=True, help="Query name.")
@click.option("--access", type=str, help="Access as 'R(v, ?) via M' (defaults to the target).")
@click.option("--rewriting", is_flag=True, help="Also output the first-order rewriting.")
@common_options
@handle_errors
def ir_command(problem, query, access, rewriting, admit_query_constants, quiet):
    """Immediate relevance of an access."""

    inst = load_problem(problem, admit_query_constants)
    q = inst.boolean_query(query)
    target = resolve_access(inst, access)
    verdict = decide_ir(inst.schema, inst.configuration, q, target)
    extra = {"query": query, "access": format_access(target, inst.schema)}
    if rewriting:
        extra["rewriting"] = str(ir_rewriting(q, target, inst.schema))
    return emit(verdict_to_json("ir", inst, verdict, **extra), quiet)


@main.command(name="ltr")
@problem_argument
@click.option("--query", default=DEFAULT_QUERY, show_default=True, help="Query name.")
@click.option("--access", type=str, help="Access as 'R(v, ?) via M' (defaults to the target).")
@click.option(
    "-a",
    "--algorithm",
    type=click.Choice(ALGORITHMS),
    show_default=True,
    default=DEFAULT_ALGORITHM,
    help="Decision procedure. 'auto' is exact with independent accesses, bounded otherwise.",
)
@budget_options
@common_options
@handle_errors
def ltr_command(problem, query, access, algorithm, admit_query_constants, quiet, **budget):
    """Long-term relevance of an access."""

    inst = load_problem(problem, admit_query_constants)
    schema, conf = inst.schema, inst.configuration
    q = inst.boolean_query(query)
    target = resolve_access(inst, access)
    if algorithm == "auto":
        algorithm = "independent" if schema.all_independent else "dependent"
        logging.info(f"[+] Using the {algorithm} procedure")

    used = None
    if algorithm == "independent":
        verdict = decide_ltr_independent(schema, conf, q, target)
    elif algorithm == "single":
        verdict = decide_ltr_single_occurrence(schema, conf, q, target)
    elif algorithm == "dependent":
        used = make_budget(q, **budget)
        verdict = decide_ltr_dependent_bounded(schema, conf, q, target, used)
    else:
        used = make_budget(q, **budget)
        verdict = ltr_via_containment_cq(schema, conf, q, target, budget=used)

    payload = verdict_to_json(
        "ltr",
        inst,
        verdict,
        used,
        query=query,
        access=format_access(target, schema),
        algorithm=algorithm,
    )
    return emit(payload, quiet, budget["deterministic"])


@main.command(name="contain")
@problem_argument
@click.option("--q1", default=DEFAULT_Q1, show_default=True, help="Contained query.")
@click.option("--q2", default=DEFAULT_Q2, show_default=True, help="Containing query.")
@budget_options
@common_options
@handle_errors
def contain_command(problem, q1, q2, admit_query_constants, quiet, **budget):
    """
    Containment under access limitations. 'yes' means contained (the whole
    bounded space was explored), 'no' comes with a witnessing path.
    """

    inst = load_problem(problem, admit_query_constants)
    first, second = inst.boolean_query(q1), inst.boolean_query(q2)
    used = make_budget(first, **budget)
    verdict = decide_containment_bounded(inst.schema, inst.configuration, first, second, used)
    payload = verdict_to_json("contain", inst, verdict, used, q1=q1, q2=q2)
    return emit(payload, quiet, budget["deterministic"])


@main.command(name="classic-contain")
@problem_argument
@click.option("--q1", default=DEFAULT_Q1, show_default=True, help="Contained query.")
@click.option("--q2", default=DEFAULT_Q2, show_default=True, help="Containing query.")
@common_options
@handle_errors
def classic_contain_command(problem, q1, q2, admit_query_constants, quiet):
    """Containment over all instances, ignoring the access methods."""

    inst = load_problem(problem, admit_query_constants)
    value = classical_contains(inst.boolean_query(q1), inst.boolean_query(q2))
    return emit(_boolean("classic-contain", inst, value, q1=q1, q2=q2), quiet)


@main.command(name="reduce")
@click.argument("kind", type=click.Choice(REDUCTIONS))
@problem_argument
@click.option("--query", default=DEFAULT_QUERY, show_default=True, help="Query name.")
@click.option("--q1", default=DEFAULT_Q1, show_default=True, help="Contained query.")
@click.option("--q2", default=DEFAULT_Q2, show_default=True, help="Containing query.")
@click.option(
    "--lang",
    type=click.Choice(LANGUAGES),
    show_default=True,
    default=DEFAULT_LANGUAGE,
    help="Query language of the produced instance.",
)
@click.option(
    "--index",
    type=int,
    show_default=True,
    default=0,
    help="Instance to print when the reduction produces several.",
)
@common_options
@handle_errors
def reduce_command(kind, problem, query, q1, q2, lang, index, admit_query_constants, quiet):
    """Apply a reduction and print the produced problem."""

    inst = load_problem(problem, admit_query_constants)
    language = QueryLanguage[lang]
    if kind == "arity":
        produced = boolean_arity_reduction(inst, query)
        logging.info(f"[+] {len(produced)} Boolean instance(s)")
        if not 0 <= index < len(produced):
            raise QRelevanceError(f"Instance index {index} out of range ({len(produced)})")
        output = produced[index]
    elif kind == "containment-to-ltr":
        output = containment_to_ltr(inst, q1, q2, language)
    elif kind == "disjunction-to-cq":
        output = encode_disjunction_as_cq(inst, q1, q2)
    elif kind == "ltr-to-containment":
        output = ltr_to_containment(inst, query)
    else:
        output = cm_to_config(config_to_cm(inst, q1, q2, lang=language))
    click.echo(print_problem(output), nl=False)


def _pairs(value: str) -> str | set[tuple[str, str]]:
    if value in ("all", "none"):
        return value
    pairs = set()
    for item in value.replace(" ", "").split(","):
        if item.count("-") != 1:
            raise QRelevanceError(f"Malformed tile pair '{item}', expected 't1-t2'")
        left, right = item.split("-")
        pairs.add((left, right))
    return pairs


def _row(value: str | None) -> tuple[str, ...] | None:
    return tuple(value.replace(" ", "").split(",")) if value else None


@main.command(name="gen")
@click.argument("kind", type=click.Choice(GENERATORS))
@click.option("--n", "n", type=int, default=1, show_default=True, help="Size parameter.")
@click.option("--tiles", type=int, default=1, show_default=True, help="Number of tile types.")
@click.option("--h", "horizontal", default="all", show_default=True, help="Horizontal pairs.")
@click.option("--v", "vertical", default="all", show_default=True, help="Vertical pairs.")
@click.option("--initial", type=str, help="Initial tiles, comma separated.")
@click.option("--final", type=str, help="Final row of the corridor, comma separated.")
@click.option("--cq", is_flag=True, help="Conjunctive encoding of the corridor.")
@random_options
@handle_errors
def gen_command(
    kind,
    n,
    tiles,
    horizontal,
    vertical,
    initial,
    final,
    cq,
    seed,
    relations,
    arity,
    domains,
    facts,
    atoms,
    lang,
    dependent_ratio,
):
    """
    Print a generated problem. Tile pairs are 'all', 'none' or a list such
    as 't1-t2,t2-t1'.
    """

    if kind == "random":
        limits = RandomLimits(
            relations=relations,
            arity=arity,
            domains=domains,
            facts=facts,
            atoms=atoms,
            language=QueryLanguage[lang],
            dependent_ratio=dependent_ratio,
        )
        output = gen_random_instance(seed, limits)
    elif kind == "tiling-grid":
        spec = TilingSpec.build(
            n, tiles, _pairs(horizontal), _pairs(vertical), _row(initial)
        ).validate()
        output = gen_tiling_grid(spec)
    else:
        row = _row(initial)
        spec = TilingSpec.build(
            n,
            tiles,
            _pairs(horizontal),
            _pairs(vertical),
            row,
            _row(final) or (row or ("t1",) * n),
            width=n,
        ).validate()
        output = gen_tiling_corridor(spec, as_cq=cq)
    click.echo(print_problem(output), nl=False)


@main.command(name="oracle")
@click.argument("kind", type=click.Choice(ORACLES))
@problem_argument
@click.option("--query", default=DEFAULT_QUERY, show_default=True, help="Query name.")
@click.option("--q1", default=DEFAULT_Q1, show_default=True, help="Contained query.")
@click.option("--q2", default=DEFAULT_Q2, show_default=True, help="Containing query.")
@click.option("--access", type=str, help="Access as 'R(v, ?) via M' (defaults to the target).")
@oracle_options
@common_options
@handle_errors
def oracle_command(kind, problem, query, q1, q2, access, admit_query_constants, quiet, **limits):
    """Brute-force answer of the definitions, for tiny problems only."""

    inst = load_problem(problem, admit_query_constants)
    schema, conf = inst.schema, inst.configuration
    bounds = OracleLimits(**limits)
    extra: dict[str, Any] = {"limits": asdict(bounds)}
    if kind == "reachable":
        reached = oracle_reachable(schema, conf, bounds)
        extra["configurations"] = sorted(sorted(str(f) for f in c) for c in reached)
        value = True
    elif kind == "contain":
        value = oracle_containment(
            schema, conf, inst.boolean_query(q1), inst.boolean_query(q2), bounds
        )
        extra.update(q1=q1, q2=q2)
    elif kind == "certain":
        value = oracle_certain(schema, conf, inst.boolean_query(query), bounds)
        extra["query"] = query
    else:
        target = resolve_access(inst, access)
        decide = oracle_ir if kind == "ir" else oracle_ltr
        value = decide(schema, conf, inst.boolean_query(query), target, bounds)
        extra.update(query=query, access=format_access(target, schema))
    return emit(_boolean(f"oracle {kind}", inst, value, **extra), quiet)


@main.command(name="fuzz")
@click.option(
    "-c",
    "--check",
    type=click.Choice(CHECKS),
    default="ir",
    show_default=True,
    help="Procedure compared with its oracle.",
)
@click.option("--runs", type=int, default=DEFAULT_RUNS, show_default=True, help="Instances.")
@click.option("-q", "--quiet", is_flag=True, help="Do not display the progress bar.")
@random_options
@oracle_options
@handle_errors
def fuzz_command(
    check,
    runs,
    quiet,
    seed,
    relations,
    arity,
    domains,
    facts,
    atoms,
    lang,
    dependent_ratio,
    **limits,
):
    """
    Differential campaign: random instances, seeded from --seed on, decided
    by a procedure and by its oracle. 'yes' means no disagreement.
    """

    random_limits = RandomLimits(
        relations=relations,
        arity=arity,
        domains=domains,
        facts=facts,
        atoms=atoms,
        language=QueryLanguage[lang],
        dependent_ratio=0.0 if check in ("ltr", "single") else dependent_ratio,
    )
    bounds = OracleLimits(**limits)
    disagreements = []
    agreed = skipped = 0
    with Progress(console=Console(stderr=True), disable=quiet) as progress:
        task = progress.add_task(f"Fuzzing {check}", total=runs)
        for current in range(seed, seed + runs):
            inst = gen_random_instance(current, random_limits)
            result = compare(check, inst, bounds)
            if result.agree is None:
                skipped += 1
            elif result.agree:
                agreed += 1
            else:
                logging.warning(f"[!] Seed {current}: {result.reason}")
                disagreements.append(
                    {
                        "seed": current,
                        "digest": digest(inst),
                        "main": result.main.name if result.main is not None else None,
                        "oracle": result.oracle,
                        "reason": result.reason,
                    }
                )
            progress.update(task, advance=1)

    payload = {
        "command": "fuzz",
        "check": check,
        "runs": runs,
        "agreements": agreed,
        "skipped": skipped,
        "disagreements": disagreements,
        "result": "no" if disagreements else "yes",
        "limits": asdict(bounds),
    }
    click.echo(dumps(payload))
    return 0


@main.command(name="check-certificate", hidden=True)
@problem_argument
@click.argument("verdict", type=click.File("r"), metavar="<verdict file>")
@common_options
@handle_errors
def check_certificate_command(problem, verdict, admit_query_constants, quiet):
    """Check the certificate of a saved JSON verdict against its problem."""

    inst = load_problem(problem, admit_query_constants)
    schema, conf = inst.schema, inst.configuration
    try:
        saved = json.load(verdict)
    except json.JSONDecodeError as e:
        raise QRelevanceError(f"Invalid verdict file: {e}") from None
    if saved.get("certificate") is None:
        raise QRelevanceError("The verdict carries no certificate")

    command = saved.get("command")
    certificate = certificate_from_json(saved["certificate"], conf, schema)
    if command == "ir":
        q = inst.boolean_query(saved["query"])
        target = parse_access(saved["access"], schema)
        valid = check_ir_certificate(schema, conf, q, target, certificate)
    elif command == "ltr" and isinstance(certificate, Path):
        q = inst.boolean_query(saved["query"])
        target = parse_access(saved["access"], schema)
        valid = check_ltr_certificate(schema, conf, q, target, certificate)
    elif command == "contain" and isinstance(certificate, Path):
        first, second = inst.boolean_query(saved["q1"]), inst.boolean_query(saved["q2"])
        valid = check_containment_certificate(schema, conf, first, second, certificate)
    else:
        raise QRelevanceError(f"No certificate check for '{command}' verdicts")
    if not valid:
        logging.warning("[!] The certificate does not hold")
    return emit(_boolean("check-certificate", inst, valid, checked=command), quiet)


if __name__ == "__main__":
    main()
