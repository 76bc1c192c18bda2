from fastapi import APIRouter, HTTPException
import logging
from typing import Optional

from app.core.exceptions import FixtureError, ToolkitError, UnknownSuiteError
from app.models.schemas import APIResponse, SuiteOptions
from app.services.suites import verification_service

logger = logging.getLogger(__name__)
router = APIRouter()


@router.get("/suites", response_model=APIResponse)
async def list_suites():
    """
    List the suite ids accepted by the run endpoint
    """
    return APIResponse(
        success=True,
        message="Available verification suites",
        data={"suites": verification_service.suite_names()}
    )


@router.post("/suites/{suite}/run", response_model=APIResponse)
def run_suite(suite: str, options: Optional[SuiteOptions] = None):
    """
    Run one verification suite and return its report

    The report is the same one the command line prints; a FAIL record does not make
    the request fail, it is reported inside the data with success set to False.
    """
    try:
        options = options or SuiteOptions()
        # file paths are command-line options only
        options.constants_file = None
        options.cache_dir = None
        report = verification_service.run_suite(suite, options)
        counts = report.counts()
        logger.info(f"Suite {suite} served: {counts['FAIL']} FAIL")

        return APIResponse(
            success=report.passed,
            message=f"{counts['PASS']} PASS, {counts['FAIL']} FAIL, {counts['SKIP']} SKIP",
            data=report.model_dump(mode="json")
        )

    except UnknownSuiteError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except FixtureError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except ToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Suite run failed: {str(e)}")
        raise HTTPException(status_code=500, detail="Internal server error during suite run")
