from fractions import Fraction
from typing import Annotated, Any

from pydantic import BaseModel, ConfigDict, PlainSerializer, PlainValidator, WithJsonSchema


def to_fraction(value: Any) -> Fraction:
    """Exact conversion; floats go through their shortest repr so 0.1 stays 1/10."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {value!r}") from e
    raise ValueError(f"cannot interpret {type(value).__name__} as a rational number")


def format_fraction(value: Fraction) -> str:
    return str(value)


Rational = Annotated[
    Fraction,
    PlainValidator(to_fraction),
    PlainSerializer(format_fraction, return_type=str),
    WithJsonSchema({"type": "string", "examples": ["3/2", "7"]}),
]


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True)
