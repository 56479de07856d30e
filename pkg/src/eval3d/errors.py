"""Exception types shared across the engine."""


class Eval3DError(Exception):
    """Base class for all engine errors."""


class MeshError(Eval3DError):
    pass


class RigError(Eval3DError):
    pass


class TensorFileError(Eval3DError):
    """Raised on malformed tensor container files.

    ``code`` is one of: "bad magic", "bad version", "bad dtype",
    "bad header", "short payload".
    """

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class BackendError(Eval3DError):
    """A sidecar backend failed or violated its response contract."""

    def __init__(self, message: str, stderr_tail: str = ""):
        self.stderr_tail = stderr_tail
        if stderr_tail:
            message = f"{message}\n--- backend stderr (tail) ---\n{stderr_tail}"
        super().__init__(message)


class MetricError(Eval3DError):
    pass


class InvertedDepthError(MetricError):
    """Least-squares depth alignment produced a non-positive scale.

    Signals that the backend emitted disparity rather than depth; the
    caller should retry with the reciprocal of the prediction.
    """


class BenchError(Eval3DError):
    pass
