from fastapi import APIRouter, HTTPException
import logging

from app.core.exceptions import FixtureError, ToolkitError
from app.models.schemas import APIResponse
from app.services.group_registry import group_registry
from app.services.suites import verification_service

logger = logging.getLogger(__name__)
router = APIRouter()


@router.get("/groups", response_model=APIResponse)
async def list_groups():
    """
    Registry groups with a one-line description each
    """
    return APIResponse(
        success=True,
        message=f"{len(group_registry.names())} registered groups",
        data={"groups": [{"name": n, "description": group_registry.describe(n)} for n in group_registry.names()]}
    )


@router.get("/groups/{name}/character-table", response_model=APIResponse)
def get_character_table(name: str):
    """
    Exported character table of a registry group

    Values are cyclotomic numbers written as {order, coeffs} with exact rational coefficients.
    Tables are served from the on-disk cache when its generator hash still matches.
    """
    try:
        cache = verification_service.table_cache()
        table = cache.get(name)
        logger.info(f"Served character table of {name} with {len(table)} characters")

        return APIResponse(
            success=True,
            message=f"Character table of {name}",
            data=cache.export(name, table)
        )

    except FixtureError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except ToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Character table of {name} failed: {str(e)}")
        raise HTTPException(status_code=500, detail="Internal server error computing the character table")
