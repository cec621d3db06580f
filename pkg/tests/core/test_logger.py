# tests/core/test_logger.py

# ==================== Imports ====================
from src.cfos.core.logger import get_logger, init_logger

# ==================== Tests ====================
def test_console_goes_to_stderr(capsys):
    logger = init_logger("cfos_test_console")
    logger.info("ingested 10 rows")
    logger.debug("hidden in production mode")
    captured = capsys.readouterr()
    assert "INFO: ingested 10 rows" in captured.err
    assert "hidden" not in captured.err
    assert captured.out == ""

def test_development_mode_shows_debug(capsys):
    logger = init_logger("cfos_test_dev", development=True)
    logger.debug("per-sample detail")
    assert "DEBUG - per-sample detail" in capsys.readouterr().err

def test_log_dir_gets_daily_debug_file(tmp_path, capsys):
    logger = init_logger("cfos_test_file", log_dir=str(tmp_path / "logs"))
    logger.debug("only in the file")
    logger.warning("in both")
    files = list((tmp_path / "logs").glob("cfos_test_file_*.log"))
    assert len(files) == 1
    text = files[0].read_text(encoding="utf-8")
    assert "DEBUG - only in the file" in text
    assert "WARNING - in both" in text
    assert "only in the file" not in capsys.readouterr().err
    for handler in logger.logger.handlers:
        handler.close()

def test_get_logger_returns_global():
    logger = init_logger()
    assert get_logger() is logger
