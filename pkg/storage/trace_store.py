# storage/trace_store.py

# Хранение результатов моделирования.
# Трасса - CSV с фиксированным набором столбцов, числа печатаются с 9 значащими
# цифрами, поэтому повторный прогон даёт побитно одинаковый файл.
# Рядом с трассой кладётся <имя>.meta.yaml с эхом конфигурации и версией кода.

import logging
import os
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np
import polars as pl
import yaml

from harness.simulation import DEBUG_COLUMNS, TRACE_COLUMNS, SimTrace
from utils.errors import TraceError

# --- Константы ---

META_SUFFIX = ".meta.yaml"


def _format(value: float) -> str:
    return f"{value:.9g}"


def _frame(columns: Mapping[str, np.ndarray], names: Iterable[str]) -> pl.DataFrame:
    return pl.DataFrame({name: [_format(v) for v in columns[name]] for name in names})


def _ensure_dir(path: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


# --- Функции модуля ---

def write_trace(trace: SimTrace, path: str):
    """
     Сохраняет трассу в CSV и метаданные в <path>.meta.yaml.

     Args:
         trace (SimTrace): Результат run_scenario.
         path (str): Путь к CSV-файлу.

     Raises:
         TraceError: Пустая трасса или ошибка записи.
     """
    if len(trace) == 0:
        error_msg = f"Пустая трасса не записывается: {path}"
        logging.error(error_msg)
        raise TraceError(error_msg)
    try:
        _ensure_dir(path)
        _frame(trace.columns(), TRACE_COLUMNS).write_csv(path)
        with open(path + META_SUFFIX, "w", encoding="utf-8") as f:
            yaml.safe_dump(trace.metadata, f, allow_unicode=True, sort_keys=False)
        logging.info(f"Трасса ({len(trace)} строк) записана: {path}")
    except OSError as e:
        error_msg = f"Ошибка при записи трассы {path}: {e}"
        logging.error(error_msg)
        raise TraceError(error_msg)


def write_model_path(trace: SimTrace, path: str):
    """Путь модели предсказателя p̂ (t_s, x_m, y_m, psi_rad)."""
    try:
        _ensure_dir(path)
        _frame(trace.model_path(), ("t_s", "x_m", "y_m", "psi_rad")).write_csv(path)
        logging.info(f"Путь модели предсказателя записан: {path}")
    except OSError as e:
        error_msg = f"Ошибка при записи пути модели {path}: {e}"
        logging.error(error_msg)
        raise TraceError(error_msg)


def write_debug_trace(trace: SimTrace, path: str):
    """Отладочная трасса: y_del и новейшее сдвинутое положение очереди предсказателя по шагам."""
    try:
        _ensure_dir(path)
        _frame(trace.debug_columns(), DEBUG_COLUMNS).write_csv(path)
        logging.info(f"Отладочная трасса записана: {path}")
    except OSError as e:
        error_msg = f"Ошибка при записи отладочной трассы {path}: {e}"
        logging.error(error_msg)
        raise TraceError(error_msg)


def read_trace(path: str) -> Dict[str, np.ndarray]:
    """
     Читает CSV-трассу в словарь столбцов.

     Raises:
         TraceError: Файл не найден, пуст или набор столбцов не совпадает.
     """
    try:
        frame = pl.read_csv(path, infer_schema_length=0)
    except (OSError, pl.exceptions.PolarsError) as e:
        error_msg = f"Не удалось прочитать трассу {path}: {e}"
        logging.error(error_msg)
        raise TraceError(error_msg)
    if tuple(frame.columns) != TRACE_COLUMNS:
        error_msg = f"Столбцы трассы {path} не совпадают с ожидаемыми: {frame.columns}"
        logging.error(error_msg)
        raise TraceError(error_msg)
    if frame.height == 0:
        error_msg = f"Трасса пуста: {path}"
        logging.error(error_msg)
        raise TraceError(error_msg)
    try:
        return {name: frame[name].cast(pl.Float64).to_numpy() for name in TRACE_COLUMNS}
    except pl.exceptions.PolarsError as e:
        error_msg = f"Нечисловые значения в трассе {path}: {e}"
        logging.error(error_msg)
        raise TraceError(error_msg)


def read_trace_metadata(path: str) -> dict:
    try:
        with open(path + META_SUFFIX, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    except FileNotFoundError:
        logging.warning(f"Метаданные трассы не найдены: {path + META_SUFFIX}")
        return {}


def metrics_frame(rows: Iterable[Tuple[str, object]]) -> pl.DataFrame:
    """Сводная таблица показателей: строка на прогон, rows - пары (имя прогона, Metrics)."""
    rows = list(rows)
    return pl.DataFrame(
        {
            "run": [name for name, _ in rows],
            "rms_e_m": [m.rms_e for _, m in rows],
            "max_abs_e_m": [m.max_abs_e for _, m in rows],
            "settle_time_s": [m.settle_time for _, m in rows],
            "zero_crossings": [m.zero_crossings for _, m in rows],
            "oscillation_sustained": [m.oscillation_sustained for _, m in rows],
            "mean_abs_delta_rate_radps": [m.mean_abs_delta_rate for _, m in rows],
            "oscillation_amplitude_m": [m.oscillation_amplitude for _, m in rows],
            "overshoot_m": [m.overshoot for _, m in rows],
        },
        schema={
            "run": pl.String,
            "rms_e_m": pl.Float64,
            "max_abs_e_m": pl.Float64,
            "settle_time_s": pl.Float64,
            "zero_crossings": pl.Int64,
            "oscillation_sustained": pl.Boolean,
            "mean_abs_delta_rate_radps": pl.Float64,
            "oscillation_amplitude_m": pl.Float64,
            "overshoot_m": pl.Float64,
        },
    )


def write_metrics_table(rows: Iterable[Tuple[str, object]], path: str) -> pl.DataFrame:
    """
     Записывает сводную таблицу показателей набора экспериментов.

     Returns:
         pl.DataFrame: Записанная таблица.
     """
    table = metrics_frame(rows)
    try:
        _ensure_dir(path)
        table.write_csv(path)
        logging.info(f"Таблица показателей ({table.height} прогонов) записана: {path}")
    except OSError as e:
        error_msg = f"Ошибка при записи таблицы показателей {path}: {e}"
        logging.error(error_msg)
        raise TraceError(error_msg)
    return table
