"""
ASGI entry point for the census HTTP API.

Serves the triangulation, construction and census routers mounted in
``api.urls``. Long census runs belong to ``manage.py census``; the API
only reads stored results and runs single-triangulation analyses.
"""
import logging
import os

from django.core.asgi import get_asgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'api.settings')

application = get_asgi_application()

logging.getLogger(__name__).info("Census API ready (ASGI)")
