from pydantic import BaseModel, ConfigDict, Field

DEFAULT_GAMMA_DEPTH = 3
DEFAULT_MAX_BRANCH_NODES = 10_000
DEFAULT_TIMEOUT_MS = 5_000


class SearchBudget(BaseModel):
    """Limits of one proof search."""

    model_config = ConfigDict(frozen=True)

    gamma_depth: int = Field(
        default=DEFAULT_GAMMA_DEPTH,
        gt=0,
        description="Universal instantiation rounds per branch",
    )
    max_branch_nodes: int = Field(
        default=DEFAULT_MAX_BRANCH_NODES,
        gt=0,
        description="Formulas a single branch may hold",
    )
    timeout_ms: int = Field(
        default=DEFAULT_TIMEOUT_MS,
        gt=0,
        description="Wall clock limit per obligation, in milliseconds",
    )
