"""HTTP service wrapping the core library.

``models`` defines the request/response schemas, ``ops`` implements each
operation over those models, and ``app`` exposes them as FastAPI routes.
The CLI reuses ``ops`` directly so local runs and the HTTP service share
one code path.
"""
