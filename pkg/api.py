"""
FastAPI Backend for pmedit

This API server exposes the pmedit subcommands as JSON endpoints. Documents
travel as text fields; every endpoint answers {exit_code, report} with the
exact report lines the command line prints.
"""

from typing import List, Optional

from dotenv import load_dotenv
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from cli import (
    CommandResult,
    run_barcode,
    run_bottleneck,
    run_component,
    run_dims,
    run_edit_cost,
    run_edit_to_interleaving,
    run_edit_verify,
    run_eval,
    run_interleaving_verify,
    run_pair_check,
    run_path_from_pair,
    run_search_interleaving,
    run_validate
)
from pm_utils import load_config, log_event

# Load environment variables
load_dotenv()

# --------------------------------------------------------------------------------------
# FastAPI App Configuration
# --------------------------------------------------------------------------------------

PMEDIT_CONFIG = load_config()

app = FastAPI(
    title="pmedit API",
    description="Edits and interleavings of finitely presented persistence modules",
    version="1.0.0"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=PMEDIT_CONFIG["api"]["cors_origins"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# --------------------------------------------------------------------------------------
# Pydantic Models
# --------------------------------------------------------------------------------------

class ModuleRequest(BaseModel):
    pmod: str


class EvalRequest(BaseModel):
    pmod: str
    at: List[str]


class ModulePairRequest(BaseModel):
    first: str
    second: str


class EditPathRequest(BaseModel):
    epath: str


class EditStepRequest(BaseModel):
    epath: str
    step: int


class WitnessRequest(BaseModel):
    first: str
    second: str
    iwit: str


class PairRequest(BaseModel):
    ipres: str


class PairCheckRequest(BaseModel):
    ipres: str
    first: str
    second: str


class SearchRequest(BaseModel):
    first: str
    second: str
    eps: str
    budget: Optional[int] = None
    seed: Optional[int] = None


class CommandResponse(BaseModel):
    exit_code: int
    report: List[str]

# --------------------------------------------------------------------------------------
# Helper Functions
# --------------------------------------------------------------------------------------

def respond(command: str, run, *args, **kwargs) -> CommandResponse:
    """
    Run a subcommand and translate input errors into HTTP 400.

    Args:
        command: Subcommand name for diagnostics
        run: The run_* function
        *args, **kwargs: Passed through to run

    Returns:
        CommandResponse with the exit code and report lines
    """
    try:
        result: CommandResult = run(*args, **kwargs)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error in {command}: {str(e)}")
    log_event("API", f"{command} -> exit {result.exit_code}")
    return CommandResponse(exit_code=result.exit_code, report=result.report)

# --------------------------------------------------------------------------------------
# API Endpoints
# --------------------------------------------------------------------------------------

@app.get("/")
async def root():
    """Health check endpoint."""
    return {
        "status": "online",
        "message": "pmedit API",
        "version": "1.0.0"
    }


@app.get("/api/formats")
async def get_formats():
    """
    Get the registered document formats and subcommands.

    Returns:
        JSON object with the formats and commands sections of the configuration
    """
    return {"formats": PMEDIT_CONFIG["formats"], "commands": PMEDIT_CONFIG["commands"]}


@app.post("/api/validate", response_model=CommandResponse)
def validate(request: ModuleRequest):
    return respond("validate", run_validate, request.pmod)


@app.post("/api/eval", response_model=CommandResponse)
def evaluate_at(request: EvalRequest):
    return respond("eval", run_eval, request.pmod, request.at)


@app.post("/api/dims", response_model=CommandResponse)
def dims(request: ModuleRequest):
    return respond("dims", run_dims, request.pmod)


@app.post("/api/barcode", response_model=CommandResponse)
def barcode(request: ModuleRequest):
    return respond("barcode", run_barcode, request.pmod)


@app.post("/api/bottleneck", response_model=CommandResponse)
def bottleneck(request: ModulePairRequest):
    return respond("bottleneck", run_bottleneck, request.first, request.second)


@app.post("/api/component", response_model=CommandResponse)
def component(request: ModuleRequest):
    return respond("component", run_component, request.pmod)


@app.post("/api/edit/verify", response_model=CommandResponse)
def edit_verify(request: EditPathRequest):
    return respond("edit-verify", run_edit_verify, request.epath)


@app.post("/api/edit/cost", response_model=CommandResponse)
def edit_cost(request: EditPathRequest):
    return respond("edit-cost", run_edit_cost, request.epath)


@app.post("/api/edit/to-interleaving", response_model=CommandResponse)
def edit_to_interleaving(request: EditStepRequest):
    return respond("edit-to-interleaving", run_edit_to_interleaving, request.epath, request.step)


@app.post("/api/interleaving/verify", response_model=CommandResponse)
def interleaving_verify(request: WitnessRequest):
    return respond("interleaving-verify", run_interleaving_verify, request.first, request.second, request.iwit)


@app.post("/api/path-from-pair", response_model=CommandResponse)
def path_from_pair(request: PairRequest):
    return respond("path-from-pair", run_path_from_pair, request.ipres)


@app.post("/api/pair-check", response_model=CommandResponse)
def pair_check(request: PairCheckRequest):
    return respond("pair-check", run_pair_check, request.ipres, request.first, request.second)


@app.post("/api/search-interleaving", response_model=CommandResponse)
def search(request: SearchRequest):
    """
    Brute-force interleaving search.

    Input errors, including instances over the dimension budget, answer 400.
    """
    return respond(
        "search-interleaving",
        run_search_interleaving,
        request.first,
        request.second,
        request.eps,
        budget=request.budget,
        seed=request.seed
    )

# --------------------------------------------------------------------------------------
# Main Entry Point
# --------------------------------------------------------------------------------------

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
