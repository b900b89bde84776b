from pydantic import BaseModel, ConfigDict, Field

DEFAULT_FUEL = 1_000_000


class EvalBudget(BaseModel):
    model_config = ConfigDict(frozen=True)

    fuel: int = Field(
        default=DEFAULT_FUEL,
        gt=0,
        description="Method calls a single evaluation may make before giving up",
    )
