"""
The KlSpark commands.

`execute` turns a RunConfig into a ResultEnvelope and is shared by the CLI,
`replay` and the service. `run_command` and `cmd_replay` add output files and return
the process exit code: 0 pass, 1 verification failure, 2 invalid input,
3 inapplicable.
"""

import json
import logging
import os
from typing import Any, Dict, Optional

from src.cli.context import build_context, load_functional
from src.cli.models import Command, OutputFormat, RunConfig
from src.core.config import get_settings
from src.core.errors import InvalidInputError, KlSparkError
from src.core.models import VERSION, ResultEnvelope, VerificationStatus
from src.core.storage import ResultStorage
from src.core.utils import generate_id, load_from_json_file
from src.quadform.models import FormFile
from src.quadform.stability import expected_euler_characteristic, is_stable
from src.sum_engine.engine import TraceEngine
from src.sum_engine.models import CSV_COLUMNS, TraceTable
from src.verify.suites import run_suite
from src.weylcomb.consistency import table_rows
from src.weylcomb.models import TABLE_COLUMNS


logger = logging.getLogger("klspark.cli")

STATUS_EXIT_CODES = {
    VerificationStatus.PASS: 0,
    VerificationStatus.FAIL: 1,
    VerificationStatus.INCONCLUSIVE: 1,
    VerificationStatus.PARTIAL: 1,
    VerificationStatus.INAPPLICABLE: 3,
}


def _envelope(config: RunConfig, result: Dict[str, Any], warnings=None, exit_code: int = 0) -> ResultEnvelope:
    return ResultEnvelope(
        run_id=generate_id(),
        command=config.command.value,
        config=config.model_dump(mode="json"),
        result=result,
        warnings=list(warnings or []),
        exit_code=exit_code,
    )


def cmd_trace(config: RunConfig) -> ResultEnvelope:
    ctx = build_context(config)
    engine = TraceEngine(ctx.datum, ctx.space, ctx.phi, ctx.chi, ctx.psi, threads=config.threads)
    table = engine.trace_table()
    table.warnings = ctx.warnings + table.warnings
    return _envelope(ctx.config, table.model_dump(mode="json"), table.warnings)


def cmd_tables(config: RunConfig) -> ResultEnvelope:
    rows = table_rows(config.type_tag, config.n_max, oracle=config.oracle)
    inconsistent = [r for r in rows if r.consistent is False]
    warnings = [f"{r.type_tag.value} n={r.n} m={r.m}: identities fail" for r in inconsistent]
    for message in warnings:
        logger.warning(message)
    return _envelope(config, {"rows": [r.model_dump(mode="json") for r in rows]}, warnings)


def cmd_verify(config: RunConfig) -> ResultEnvelope:
    report = run_suite(config)
    return _envelope(config, report.model_dump(mode="json"), report.warnings, STATUS_EXIT_CODES[report.status])


def config_from_form_file(config: RunConfig) -> RunConfig:
    """
    Fill field and datum from a form file named by a matrices: phi.

    Raises:
        InvalidInputError: If the file is not a form file
    """
    if not config.phi.startswith("matrices:") or config.functional is not None:
        return config
    path = config.phi[len("matrices:"):]
    data = load_from_json_file(path)
    if not isinstance(data, dict) or "functional" not in data:
        return config.model_copy(update={"functional": load_functional(path)})
    form = FormFile.model_validate(data)
    datum = form.datum
    return config.model_copy(update={
        "type_tag": datum.get("type", datum.get("type_tag", config.type_tag)),
        "n": datum.get("n", config.n),
        "m": datum.get("m", config.m),
        "d": datum.get("d", config.d),
        "p": form.field.p,
        "e": form.field.e,
        "q": None,
        "modulus": form.field.modulus,
        "field_seed": form.field.seed,
        "functional": form.functional,
    })


def cmd_stability(config: RunConfig) -> ResultEnvelope:
    config = RunConfig.model_validate(config_from_form_file(config).model_dump())
    ctx = build_context(config)
    verdict = is_stable(ctx.datum, ctx.space, ctx.phi)
    result: Dict[str, Any] = {
        "datum": ctx.datum.model_dump(mode="json"),
        "stability": verdict.model_dump(mode="json"),
    }
    if ctx.datum.family == "unitary" and verdict.stable:
        result["expected_euler_characteristic"] = expected_euler_characteristic(ctx.datum, ctx.space, ctx.phi)
    warnings = list(ctx.warnings)
    if not verdict.stable:
        warnings.append(f"phi is not stable: {verdict.reason}")
    return _envelope(ctx.config, result, warnings)


COMMANDS = {
    Command.TRACE: cmd_trace,
    Command.TABLES: cmd_tables,
    Command.VERIFY: cmd_verify,
    Command.STABILITY: cmd_stability,
}


def execute(config: RunConfig) -> ResultEnvelope:
    """
    Run one command.

    Raises:
        KlSparkError: Any classification, input or applicability error
    """
    logger.info(f"Executing {config.command.value}")
    return COMMANDS[config.command](config)


def default_output(envelope: ResultEnvelope, config: RunConfig, root: str) -> str:
    extension = "csv" if config.format == OutputFormat.CSV else "json"
    return os.path.join(root, f"{envelope.command}-{envelope.run_id}.{extension}")


def write_output(envelope: ResultEnvelope, config: RunConfig, storage: Optional[ResultStorage] = None) -> Optional[str]:
    """
    Write the envelope as JSON, or its rows as CSV.

    The CSV form is available for trace tables and table rows; the JSON
    envelope is always written next to it so the run stays replayable.
    """
    storage = storage or ResultStorage(get_settings().results_dir)
    path = config.output or default_output(envelope, config, storage.root)
    if config.format != OutputFormat.CSV:
        return storage.save_result(envelope, path)
    if config.command == Command.TRACE:
        rows, columns = TraceTable.model_validate(envelope.result).csv_rows(), CSV_COLUMNS
    elif config.command == Command.TABLES:
        rows, columns = envelope.result["rows"], TABLE_COLUMNS
    else:
        raise InvalidInputError(f"CSV output is available for trace and tables, not {config.command.value}")
    if not storage.save_rows_csv(rows, columns, path):
        return None
    storage.save_result(envelope, os.path.splitext(path)[0] + ".json")
    logger.info(f"Wrote {len(rows)} rows to {path}")
    return path


def run_command(config: RunConfig) -> int:
    """Execute, write the output and report; returns the exit code."""
    try:
        envelope = execute(config)
    except KlSparkError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        print(json.dumps(e.to_dict()))
        return e.exit_code
    path = write_output(envelope, config)
    if config.command == Command.VERIFY:
        print(json.dumps(envelope.result, indent=2, default=str))
    print(json.dumps({"command": envelope.command, "exit_code": envelope.exit_code, "path": path}))
    return envelope.exit_code


def cmd_replay(path: str) -> int:
    """
    Re-run a result file from its embedded RunConfig and compare bit-exactly.

    Returns:
        0 if the result and warnings are reproduced, 1 otherwise, 2 for an unreadable file
    """
    storage = ResultStorage(get_settings().results_dir)
    original = storage.load_result(path)
    if original is None:
        logger.error(f"Cannot read result file {path}")
        return 2
    if original.version != VERSION:
        logger.warning(f"{path} was written by version {original.version}, replaying with {VERSION}")
    config = RunConfig.model_validate(original.config)
    try:
        replayed = execute(config)
    except KlSparkError as e:
        logger.error(f"Replay failed: {e.message}")
        return e.exit_code
    same = (
        json.dumps(replayed.result, sort_keys=True) == json.dumps(original.result, sort_keys=True)
        and replayed.warnings == original.warnings
        and replayed.exit_code == original.exit_code
    )
    if same:
        logger.info(f"Replay of {path} reproduced the result exactly")
    else:
        logger.error(f"Replay of {path} differs from the stored result")
    print(json.dumps({"path": path, "reproduced": same}))
    return 0 if same else 1
