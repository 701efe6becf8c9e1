"""
Configuration module for lorhelix.
Provides environment-driven configuration with sensible defaults.
"""
import os


def _env_float(name, default):
    return float(os.environ.get(name, default))


class Config:
    """Base configuration class with common settings."""

    # Flask settings
    SECRET_KEY = os.environ.get('SECRET_KEY') or 'dev-secret-key-change-in-production'
    DEBUG = os.environ.get('FLASK_DEBUG', 'False').lower() == 'true'
    TESTING = False
    MAX_CONTENT_LENGTH = int(os.environ.get('MAX_CONTENT_LENGTH', 25 * 1024 * 1024))  # 25MB default

    # CORS settings
    CORS_ORIGINS = os.environ.get('CORS_ORIGINS', '*').split(',')
    CORS_METHODS = ['GET', 'POST', 'OPTIONS']
    CORS_HEADERS = ['Content-Type', 'Authorization']

    # Numerical tolerances
    CAUSAL_TOL = _env_float('LORHELIX_TOL', 1e-9)  # on g(v,v)
    FRAME_DRIFT_TOL = _env_float('LORHELIX_FRAME_DRIFT_TOL', 1e-6)
    INITIAL_FRAME_TOL = _env_float('LORHELIX_INITIAL_FRAME_TOL', 1e-12)
    RATIO_TOL = _env_float('LORHELIX_RATIO_TOL', 1e-10)
    RATIO_SCAN_POINTS = int(os.environ.get('LORHELIX_RATIO_SCAN', 1001))
    DISCREPANCY_TOL = _env_float('LORHELIX_DISCREPANCY_TOL', 1e-4)
    RECOVERY_TOL = _env_float('LORHELIX_RECOVERY_TOL', 1e-3)  # on kappa, tau from samples
    SPEED_TOL = _env_float('LORHELIX_SPEED_TOL', 1e-5)
    FD_SPACING = _env_float('LORHELIX_FD_SPACING', 5e-3)  # stencil node spacing when verifying
    CURVATURE_FLOOR = _env_float('LORHELIX_CURVATURE_FLOOR', 1e-8)

    # Sampling and output
    DEFAULT_STEP = _env_float('LORHELIX_STEP', 1e-3)
    OUTPUT_DIGITS = int(os.environ.get('LORHELIX_DIGITS', 17))

    # Logging settings
    LOG_LEVEL = os.environ.get('LORHELIX_LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_FILE = os.environ.get('LORHELIX_LOG_FILE')

    # Validation settings
    VALIDATION_STRICT = os.environ.get('LORHELIX_VALIDATION_STRICT', 'False').lower() == 'true'


class DevelopmentConfig(Config):
    """Development configuration."""
    DEBUG = True
    CORS_ORIGINS = ['http://localhost:3000', 'http://127.0.0.1:3000']
    LOG_LEVEL = os.environ.get('LORHELIX_LOG_LEVEL', 'DEBUG')


class ProductionConfig(Config):
    """Production configuration."""
    DEBUG = False
    LOG_LEVEL = os.environ.get('LORHELIX_LOG_LEVEL', 'WARNING')
    VALIDATION_STRICT = True


class TestingConfig(Config):
    """Testing configuration."""
    TESTING = True
    DEBUG = True
    CORS_ORIGINS = ['http://localhost:3000']
    LOG_LEVEL = 'WARNING'


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config():
    """Get configuration based on environment."""
    config_name = os.environ.get('LORHELIX_ENV', 'default')
    return config.get(config_name, config['default'])
