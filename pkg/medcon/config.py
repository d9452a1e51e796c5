import logging
import os


def _default_lambda_grid():
    # 1.00, 0.95, ..., 0.05
    return tuple(round(1.0 - 0.05 * i, 2) for i in range(20))


class Config:
    """Base configuration class"""
    # Consensus engine
    CONSENSUS_MAX_ITERATIONS = 1000
    CONSENSUS_WORKERS = 1
    CONSENSUS_CHUNK_EDGES = 262144
    CONSENSUS_CHECK_OBJECTIVE = False

    # Baselines / oracle
    SMALL_INSTANCE_CAP = 2000
    EXACT_MAX_N = 12

    # Grouping
    LAMBDA_GRID = _default_lambda_grid()
    GROUPING_METRIC = 'split_join'

    # Logging
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'WARNING'

    # Application specific
    APP_NAME = 'Graph Median Consensus'
    APP_VERSION = '1.0.0'

    JSON_SORT_KEYS = False

    @classmethod
    def init_app(cls, app):
        level = getattr(logging, str(app.config.get('LOG_LEVEL', cls.LOG_LEVEL)).upper(), logging.WARNING)

        # Log to stderr
        logger = logging.getLogger('medcon')
        if not any(getattr(h, '_medcon_handler', False) for h in logger.handlers):
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
            handler._medcon_handler = True
            logger.addHandler(handler)
        logger.setLevel(level)
        app.logger.setLevel(level)


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'DEBUG'


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True

    # Recompute the objective from scratch after every iteration
    CONSENSUS_CHECK_OBJECTIVE = True

    # Small chunks so the chunked kernel path is exercised
    CONSENSUS_CHUNK_EDGES = 64


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'INFO'


config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': Config
}
