"""
KlSpark compute service.

A FastAPI application that accepts RunConfigs, runs them in the background
and keeps the run records in memory and under the results directory.
"""

import logging
from typing import Dict, Optional

from fastapi import BackgroundTasks, Body, FastAPI, HTTPException

from src.cli.commands import execute, write_output
from src.cli.context import resolve_datum, resolve_field
from src.cli.models import Command, RunConfig
from src.core.config import get_settings
from src.core.errors import KlSparkError
from src.core.models import VERSION, Capability, RunRecord, RunStatus, ServiceCard
from src.core.storage import ResultStorage
from src.core.utils import generate_id


CAPABILITIES = [
    Capability(
        id=Command.TRACE.value,
        name="Trace table",
        description="S(t) for every t in F_q^x with stability and normalization metadata",
        parameters={"required": ["type_tag", "n", "m", "q or p"], "optional": ["d", "phi", "chi", "psi_multiplier"]},
    ),
    Capability(
        id=Command.TABLES.value,
        name="Monodromy tables",
        description="Unipotent monodromy, Springer fibre dimension and Levi length rows",
        parameters={"required": ["type_tag"], "optional": ["n_max", "oracle"]},
    ),
    Capability(
        id=Command.VERIFY.value,
        name="Verification suite",
        description="um2-odd, um2-even, purity, euler, reconstruction, consistency or ft-identity",
        parameters={"required": ["suite"], "optional": ["k_max", "limit", "seed"]},
    ),
    Capability(
        id=Command.STABILITY.value,
        name="Stability",
        description="Stability verdict and pencil data of a functional",
        parameters={"required": ["phi"]},
    ),
]

# commands whose datum and field can be validated before the run is accepted
DATUM_COMMANDS = (Command.TRACE,)


class KlSparkService:
    """
    Run submission service.

    POST /runs accepts a RunConfig and answers with the pending run record;
    the computation happens in a background task.
    """

    def __init__(
        self,
        service_id: str = "klspark",
        name: str = "KlSpark",
        description: str = "Trace functions of generalized Kloosterman sheaves over finite fields",
        version: str = VERSION,
        base_url: str = "http://localhost",
        port: Optional[int] = None,
        storage: Optional[ResultStorage] = None,
    ):
        """
        Initialize the service.

        Args:
            service_id: Identifier reported in the service card
            name: Human-readable name
            description: What the service computes
            version: Service version
            base_url: Base URL for the card's endpoint list
            port: Port; the configured port when omitted
            storage: Run and result storage; the results directory when omitted
        """
        settings = get_settings()
        self.service_id = service_id
        self.name = name
        self.description = description
        self.version = version
        self.port = port or settings.port
        self.service_url = f"{base_url}:{self.port}"
        self.storage = storage or ResultStorage(settings.results_dir)
        self.runs: Dict[str, RunRecord] = {}
        self.capabilities = list(CAPABILITIES)
        self.logger = logging.getLogger(f"klspark.service.{service_id}")
        self.app = self._create_app()

    def _create_app(self) -> FastAPI:
        app = FastAPI(title=f"{self.name} API", description=self.description, version=self.version)

        @app.get("/card", response_model=ServiceCard)
        async def get_service_card():
            return self.get_service_card()

        @app.post("/runs", status_code=201, response_model=RunRecord)
        async def create_run(background_tasks: BackgroundTasks, config: RunConfig = Body(...)):
            return self._handle_incoming_run(background_tasks, config)

        @app.get("/runs/{run_id}", response_model=RunRecord)
        async def get_run(run_id: str):
            run = self.runs.get(run_id) or self.storage.get_run(run_id)
            if run is None:
                raise HTTPException(status_code=404, detail=f"Run {run_id} not found")
            return run

        return app

    def get_service_card(self) -> ServiceCard:
        endpoints = {
            "card": f"{self.service_url}/card",
            "runs": f"{self.service_url}/runs",
        }
        return ServiceCard(
            id=self.service_id,
            name=self.name,
            description=self.description,
            version=self.version,
            capabilities=self.capabilities,
            endpoints=endpoints,
        )

    def _handle_incoming_run(self, background_tasks: BackgroundTasks, config: RunConfig) -> RunRecord:
        """
        Validate and queue a run.

        Raises:
            HTTPException: 400 with the violated rule for an inadmissible datum or field
        """
        if config.command in DATUM_COMMANDS:
            try:
                resolve_field(config)
                resolve_datum(config)
            except KlSparkError as e:
                raise HTTPException(status_code=400, detail=e.to_dict())
        run = RunRecord(id=generate_id(), config=config.model_dump(mode="json"))
        self.runs[run.id] = run
        self.storage.save_run(run)
        background_tasks.add_task(self._process_run, run, config)
        return run

    def _process_run(self, run: RunRecord, config: RunConfig) -> None:
        """Run the command; errors end up in the run's metadata."""
        run.update_status(RunStatus.IN_PROGRESS)
        self.storage.save_run(run)
        try:
            self.logger.info(f"Processing run {run.id} ({config.command.value})")
            envelope = execute(config)
            envelope.run_id = run.id
            path = write_output(envelope, config, self.storage)
            run.result = envelope.model_dump(mode="json")
            run.metadata = {"path": path, "exit_code": envelope.exit_code}
            run.update_status(RunStatus.COMPLETED)
            self.logger.info(f"Completed run {run.id}")
        except KlSparkError as e:
            self.logger.error(f"Error processing run {run.id}: {e.message}")
            run.metadata = {"error": e.message, "exit_code": e.exit_code, "rule": e.rule}
            run.update_status(RunStatus.FAILED)
        except Exception as e:
            self.logger.exception(f"Unexpected error processing run {run.id}: {str(e)}")
            run.metadata = {"error": str(e), "exit_code": 1, "rule": None}
            run.update_status(RunStatus.FAILED)
        self.storage.save_run(run)

    def run(self, host: Optional[str] = None) -> None:
        """
        Serve the API; returns when the server shuts down.

        Args:
            host: Bind address; the configured host when omitted
        """
        import uvicorn
        uvicorn.run(self.app, host=host or get_settings().host, port=self.port)
