from typing import Any

from fastapi import APIRouter

from app.models.report import GeneratedInstance, GeneratorSpec
from app.services.generators import generate
from app.services.graph_core import instance_digest, serialize_instance

router = APIRouter()


@router.post("/generate", response_model=GeneratedInstance)
def generate_instance(spec: GeneratorSpec) -> Any:
    """
    Generate a seeded instance; the same spec always returns the same text.
    """
    inst = generate(spec)
    return GeneratedInstance(text=serialize_instance(inst), digest=instance_digest(inst))
