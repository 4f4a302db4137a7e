# CLI modules for the robust beamforming tool
