"""
URL configuration for api project.
"""
from django.contrib import admin
from django.urls import path
from ninja import NinjaAPI
import logging

from triangulations.exceptions import TriangulationError
from triangulations.routers import router as triangulations_router
from constructions.routers import router as constructions_router
from census.exceptions import CensusError
from census.routers import router as census_router

logger = logging.getLogger(__name__)

# Create Django Ninja API instance
api = NinjaAPI(
    title="Census API",
    description="Minimal closed non-orientable triangulations: analysis, constructions and census runs",
    version="1.0.0",
)


# Register custom exception handlers
@api.exception_handler(TriangulationError)
def triangulation_error_handler(request, exc):
    logger.warning(f"Unhandled triangulation error on {request.path}: {exc}")
    return api.create_response(
        request,
        {"success": False, "error": "Invalid triangulation", "details": str(exc)},
        status=400,
    )


@api.exception_handler(CensusError)
def census_error_handler(request, exc):
    logger.warning(f"Unhandled census error on {request.path}: {exc}")
    return api.create_response(
        request,
        {"success": False, "error": "Census error", "details": str(exc)},
        status=400,
    )


# Register routers
api.add_router("/triangulations", triangulations_router)
api.add_router("/constructions", constructions_router)
api.add_router("/census", census_router)


@api.get("/")
def hello(request):
    """Health check endpoint"""
    return {"message": "Welcome to the Census API"}


urlpatterns = [
    path('admin/', admin.site.urls),
    path('api/', api.urls),
]
