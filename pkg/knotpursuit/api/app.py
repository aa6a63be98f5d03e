from contextlib import asynccontextmanager

from fastapi import FastAPI

from knotpursuit.api.routes import router as models_router
from knotpursuit.features import register_methods
from knotpursuit.settings import settings


@asynccontextmanager
async def lifespan(app: FastAPI):
    register_methods()
    yield


def create_app() -> FastAPI:
    app = FastAPI(
        title=settings.app_name,
        version="1.0.0",
        lifespan=lifespan,
    )
    app.include_router(models_router)

    @app.get("/health")
    async def health_check():
        return {"status": "ok"}

    return app
