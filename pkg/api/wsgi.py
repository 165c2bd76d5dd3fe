"""
WSGI entry point for the census HTTP API.

Same routes as the ASGI application; use it behind a synchronous server
such as gunicorn.
"""
import logging
import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'api.settings')

application = get_wsgi_application()

logging.getLogger(__name__).info("Census API ready (WSGI)")
