import pytest
from fastapi import FastAPI
from fastapi.testclient import TestClient
from app.routers import queues, timers, verification
from app.sessions import SessionStore, get_store


@pytest.fixture
def session_store():
    """Fresh store so sessions do not leak between tests"""
    return SessionStore()


@pytest.fixture
def client(session_store):
    """Test client over every simulator router"""
    app = FastAPI()
    app.include_router(queues.router)
    app.include_router(timers.router)
    app.include_router(verification.router)
    app.dependency_overrides[get_store] = lambda: session_store
    return TestClient(app)


@pytest.fixture
def queue_id(client):
    """Session over a 2 x 4 queue"""
    response = client.post('/queues', json={'n_blocks': 2, 'slots_per_block': 4})
    return response.json()['session_id']


@pytest.fixture
def timer_id(client):
    """Session over a 4 x 4 timer queue with 8-bit deadlines"""
    response = client.post('/timers', json={'n_blocks': 4, 'slots_per_block': 4, 'data_width': 8})
    return response.json()['session_id']
