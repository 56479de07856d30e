from .tensorfile import read_tensor, write_tensor
from .protocol import (
    KINDS,
    BackendRequest,
    BackendResponse,
    QAItem,
    TensorInput,
    ImageInput,
    FileInput,
    TextInput,
    SubprocessBackend,
    invoke_backend,
    load_request,
    load_response,
    prepare_job,
    validate_response,
    write_response,
)
from . import stubs

__all__ = [
    "KINDS",
    "BackendRequest",
    "BackendResponse",
    "QAItem",
    "TensorInput",
    "ImageInput",
    "FileInput",
    "TextInput",
    "SubprocessBackend",
    "invoke_backend",
    "load_request",
    "load_response",
    "prepare_job",
    "validate_response",
    "write_response",
    "read_tensor",
    "write_tensor",
    "stubs",
]
