from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.routes import corpus, families, groups

app = FastAPI(
    title="Lie Nilpotency Index Service",
    description="Lie dimension subgroups and Lie nilpotency indices of modular group algebras F_p[G]",
    version="0.1.0"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(groups.router)
app.include_router(families.router)
app.include_router(corpus.router)


@app.get("/")
async def root():
    return {
        "message": "Lie nilpotency indices of modular group algebras",
        "documentation": "/docs"
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run("app.main:app", host="0.0.0.0", port=8000, reload=True)
