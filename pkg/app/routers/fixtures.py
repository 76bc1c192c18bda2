from fastapi import APIRouter, HTTPException
import logging

from app.core.exceptions import FixtureError
from app.models.schemas import APIResponse, SuiteOptions
from app.services.fixture_loader import fixture_loader
from app.services.suites import verification_service

logger = logging.getLogger(__name__)
router = APIRouter()


@router.get("/fixtures/clifford", response_model=APIResponse)
async def list_clifford_fixtures():
    """
    Names of the shipped Clifford fixtures, grouped by kind
    """
    try:
        by_kind = {}
        for fix in fixture_loader.clifford_file().fixtures:
            by_kind.setdefault(fix.kind, []).append(fix.name)

        return APIResponse(
            success=True,
            message=f"{sum(len(v) for v in by_kind.values())} Clifford fixtures",
            data={"fixtures": fixture_loader.clifford_names(), "by_kind": by_kind}
        )

    except FixtureError as e:
        logger.error(f"Listing Clifford fixtures failed: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/fixtures/clifford/{name}", response_model=APIResponse)
def get_clifford_fixture(name: str):
    """
    One Clifford fixture together with the records of its checks
    """
    try:
        fixture = fixture_loader.clifford_fixture(name)
        report = verification_service.run_suite("clifford", SuiteOptions(fixture=name))

        return APIResponse(
            success=report.passed,
            message=f"Fixture {name} verified" if report.passed else f"Fixture {name} has failing checks",
            data={
                "fixture": fixture.model_dump(),
                "records": [r.model_dump(mode="json") for r in report.records],
            }
        )

    except FixtureError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except Exception as e:
        logger.error(f"Fixture verification failed: {str(e)}")
        raise HTTPException(status_code=500, detail="Internal server error during fixture verification")
