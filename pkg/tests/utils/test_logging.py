import importlib
import logging

import pytest

import pylivcond.utils._logging as module


class TestSetupCLILogging:
    def test_message_redirection(self, capsys):
        """Test that logging messages are redirected to the correct stream."""
        importlib.reload(module)
        module.setup_cli_logging(logging.DEBUG)
        logger = logging.getLogger("pylivcond.som")
        logger.debug("debug message")
        logger.info("info message")
        logger.warning("warning message")
        logger.error("error message")

        out, err = capsys.readouterr()
        assert "debug message" in out
        assert "info message" in out
        assert "info message" not in err
        assert "warning message" in err
        assert "warning message" not in out
        assert "error message" in err

    def test_maximum_level(self):
        """Test maximum level is warning."""
        module.setup_cli_logging(logging.ERROR)
        logger = logging.getLogger()
        assert logger.level == logging.WARNING

    def test_quiet_dask(self, capsys):
        """Test dask cluster chatter below WARNING is hidden."""
        importlib.reload(module)
        module.setup_cli_logging(logging.DEBUG)
        logging.getLogger("distributed.scheduler").info("scheduler at tcp://x")
        logging.getLogger("distributed.worker").warning("worker lost")

        out, err = capsys.readouterr()
        assert "scheduler at" not in out
        assert "worker lost" in err


class TestCLILevel:
    def test_flags(self):
        """Test the translation of the verbosity flags."""
        assert module.cli_level(False, False) == logging.INFO
        assert module.cli_level(True, False) == logging.DEBUG
        assert module.cli_level(False, True) == logging.WARNING

    def test_verbose_priority(self):
        """Test that --verbose wins over --silent."""
        assert module.cli_level(True, True) == logging.DEBUG


class TestLoggingStack:
    def setup_stack(self):
        """Return a LoggingStack with some messages."""
        stack = module.LoggingStack("grid-10x10")
        stack.info("Training on %i profiles", 52)
        stack.warning("Falling back to uniform-box initialisation.")
        return stack

    def test_collect_and_flush(self, capsys):
        """Test collecting messages then flushing to a logging Logger."""
        stack = self.setup_stack()
        assert len(stack.messages) == 2
        importlib.reload(module)
        module.setup_cli_logging(logging.DEBUG)
        stack.flush(logging.getLogger())

        out, err = capsys.readouterr()
        assert "[grid-10x10] Training on 52 profiles" in out
        assert "[grid-10x10] Falling back" in err
        assert len(stack.messages) == 0

    def test_picklable_and_reconstruction(self):
        """Test pickling then reconstructing."""
        stack = self.setup_stack()
        restored = module.LoggingStack(*stack.picklable())
        assert restored.messages == stack.messages
        assert restored.name == stack.name

    def test_error_wrong_level(self):
        """Test that unknown levels are rejected."""
        stack = module.LoggingStack("string-10")
        with pytest.raises(AttributeError):
            stack.notalevel("message")
