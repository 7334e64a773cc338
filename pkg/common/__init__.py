# common/__init__.py
# Infraestructura compartida: logging, configuración, errores, grafo, exportación.
