# gossip/__init__.py
# Núcleo del simulador: cuantizador, motor de gossip, análisis y harness.
