"""
Graph median consensus: application factory
"""
import os

from flask import Flask, jsonify

from medcon.config import config
from medcon.errors import MedconError

__version__ = '1.0.0'


def create_app(config_name=None):
    """Create and configure the Flask application"""
    if config_name is None:
        config_name = os.environ.get('MEDCON_CONFIG', 'default')
    if config_name not in config:
        raise KeyError(f"unknown configuration {config_name!r}; choose from {sorted(config)}")

    app = Flask(__name__)
    app.config.from_object(config[config_name])
    config[config_name].init_app(app)

    # Register blueprints
    from medcon.api import api_bp
    app.register_blueprint(api_bp, url_prefix='/api')

    # Register CLI commands
    from medcon.cli import register_commands
    register_commands(app)

    @app.errorhandler(MedconError)
    def handle_medcon_error(error):
        app.logger.info("request failed in stage %s: %s", error.stage, error.message)
        return jsonify(error.to_dict()), 400

    return app
