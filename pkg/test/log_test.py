# -*- coding: utf-8 -*-
import json
import logging.config
import os

from mock import Mock

from crystalwalk.log import (
    DEFAULT_HANDLERS,
    configure_logging,
    default_config,
    load_logging_config,
)


class TestLog(object):
    def test_default(self):
        log_config = default_config(level="DEBUG")
        assert log_config["root"]["level"] == "DEBUG"

    def test_default_is_a_copy(self):
        default_config(level="DEBUG")["handlers"]["extra"] = {}
        assert "extra" not in default_config()["handlers"]

    def test_handlers_use_stderr(self):
        assert DEFAULT_HANDLERS["default"]["stream"] == "ext://sys.stderr"

    def test_configure_logging(self, tmpdir, monkeypatch):
        raw_config = {
            "handlers": {
                "file": {
                    "class": "logging.FileHandler",
                    "filename": os.path.join(str(tmpdir), "log", "%(command)s-%(seed)s.log"),
                }
            }
        }

        config_mock = Mock()
        monkeypatch.setattr(logging.config, "dictConfig", config_mock)

        configure_logging(raw_config, command="verify", seed=7)

        assert os.path.exists(os.path.join(str(tmpdir), "log"))
        assert config_mock.called is True

        mangled_config = config_mock.call_args[0][0]
        assert mangled_config["handlers"]["file"]["filename"].endswith("verify-7.log")

    def test_configure_logging_keeps_unknown_placeholders(self, monkeypatch):
        config_mock = Mock()
        monkeypatch.setattr(logging.config, "dictConfig", config_mock)

        configure_logging({"formatters": {"f": {"format": "%(message)s"}}})

        mangled_config = config_mock.call_args[0][0]
        assert mangled_config["formatters"]["f"]["format"] == "%(message)s"

    def test_load_logging_config(self, tmpdir):
        path = os.path.join(str(tmpdir), "logging.json")
        with open(path, "w") as config_file:
            json.dump(default_config("WARNING"), config_file)

        assert load_logging_config(path)["root"]["level"] == "WARNING"

    def test_configure_logging_only_fills_command_and_seed(self, monkeypatch):
        config_mock = Mock()
        monkeypatch.setattr(logging.config, "dictConfig", config_mock)

        raw_config = {"formatters": {"f": {"format": "%(command)s %(run_name)s %(seed)s"}}}
        configure_logging(raw_config, command="sweep")

        mangled_config = config_mock.call_args[0][0]
        assert mangled_config["formatters"]["f"]["format"] == "sweep %(run_name)s None"
