from fastapi import APIRouter

from src.api.dependencies import http_error, pattern_or_400
from src.api.schemas.closure import ClosureOut, ClosureRequest
from src.errors import BootstrapError
from src.parser.edge_list import parse_edge_list
from src.services.closure_engine import closure
from src.services.witness_tracker import audit_closure

router = APIRouter(prefix="/api", tags=["Closure"])

@router.post("/closure", response_model=ClosureOut)
def compute_closure(request: ClosureRequest):
    """
    Runs the bootstrap closure on the posted edge list.
    With `witness` set, the structural checks run on every infected edge as well.
    """
    pattern = pattern_or_400(request.r, request.s)
    try:
        graph = parse_edge_list(request.edge_list)
        result = closure(graph, pattern, track_witnesses=request.witness)
        audit = audit_closure(graph, pattern, result=result) if request.witness else None
    except BootstrapError as e:
        raise http_error(e)
    return ClosureOut.from_domain(result, audit)
