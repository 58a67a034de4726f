from app.routers import queues, timers, verification
