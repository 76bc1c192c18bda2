from fastapi import APIRouter, HTTPException
import logging

from app.core.exceptions import ToolkitError
from app.models.schemas import APIResponse
from app.services.fixture_loader import fixture_loader
from app.services.masspred import ConstantsTable, ratio_checks, tau_prediction
from app.utils.helpers import DecimalFormatter

logger = logging.getLogger(__name__)
router = APIRouter()

DEFAULT_PLACES = {"tau-mass": 5, "neutron-proton": 6, "electron-proton": 8}


@router.get("/constants", response_model=APIResponse)
async def get_constants():
    """
    Measured quantities of the configured constants file
    """
    try:
        table = ConstantsTable.load()
        return APIResponse(
            success=True,
            message=f"{len(table.quantities)} constants from {table.source or 'constants file'}",
            data={"source": table.source, "hash": table.content_hash, "constants": table.to_dict()}
        )

    except ToolkitError as e:
        logger.error(f"Loading constants failed: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/predictions", response_model=APIResponse)
async def get_predictions():
    """
    The tau-mass prediction and the two nucleon ratio checks at display precision

    The ratio formulas are numerical coincidences; the deviations are reported as they are
    and nothing here labels them as physical laws.
    """
    try:
        table = ConstantsTable.load()
        try:
            acceptance = fixture_loader.acceptance()
        except ToolkitError:
            acceptance = {}
        places = {k: int(acceptance.get(k, {}).get("places", v)) for k, v in DEFAULT_PLACES.items()}

        tau = tau_prediction(table)
        neutron, electron = ratio_checks(table)
        tau_data = tau.to_dict(places["tau-mass"])
        tau_data["display"] = DecimalFormatter.with_uncertainty(tau.predicted.value, tau.predicted.sigma,
                                                                places["tau-mass"])

        return APIResponse(
            success=True,
            message="Mass-formula predictions computed",
            data={
                "tau-mass": tau_data,
                "neutron-proton": neutron.to_dict(places["neutron-proton"]),
                "electron-proton": electron.to_dict(places["electron-proton"]),
            }
        )

    except ToolkitError as e:
        logger.error(f"Predictions failed: {str(e)}")
        raise HTTPException(status_code=400, detail=str(e))
