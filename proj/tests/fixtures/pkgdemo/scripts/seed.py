import app
from app import User
from app.services.registry import Registry
from app.util import *


def seed():
    registry = Registry("Core Team")
    admin = User("root", "root@example.com")
    registry.register("ada", normalize_email("ADA@example.com"))
    return registry, admin, app.models.MAX_USERS
