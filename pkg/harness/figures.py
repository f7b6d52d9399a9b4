# harness/figures.py

# Наборы экспериментов: каждый набор - файл scenarios/<имя>.yaml с базовым
# сценарием и списком прогонов, переопределяющих отдельные поля базы.

import logging
import os
from pathlib import Path
from typing import Dict, List, NamedTuple, Tuple

import polars as pl

from harness.metrics import Metrics, metrics_for
from harness.scenario_config import ScenarioConfig, deep_merge, load_yaml, parse_config
from harness.simulation import SimTrace, run_scenario
from storage.trace_store import metrics_frame, write_metrics_table, write_model_path, write_trace
from utils.errors import ConfigError, UnknownFigureError

FIGURES = ("fig3", "fig4", "fig8", "fig10", "fig11", "fig12")
SCENARIOS_DIR = Path(__file__).resolve().parent.parent / "scenarios"
# Прогон, для которого в fig8 дополнительно пишется путь модели предсказателя.
MODEL_PATH_RUN = "dead_time_1s_compensated"


class SuiteResult(NamedTuple):
    name: str
    traces: Dict[str, SimTrace]
    metrics: Dict[str, Metrics]
    table: pl.DataFrame


def load_suite(name: str, scenarios_dir: Path = SCENARIOS_DIR) -> List[Tuple[str, ScenarioConfig]]:
    """
     Читает набор экспериментов и строит конфигурации всех прогонов.

     Raises:
         UnknownFigureError: Нет такого набора.
         ConfigError: Ошибка в файле набора (с указанием прогона и поля).
     """
    if name not in FIGURES:
        error_msg = f"неизвестный набор '{name}', допустимы {FIGURES}"
        logging.error(error_msg)
        raise UnknownFigureError(error_msg, "figure")
    suite = load_yaml(str(Path(scenarios_dir) / f"{name}.yaml"))
    if not isinstance(suite, dict) or not isinstance(suite.get("runs"), list) or not suite["runs"]:
        raise ConfigError("набор должен содержать base и непустой список runs", name)
    unknown = sorted(set(suite) - {"figure", "description", "base", "runs"})
    if unknown:
        raise ConfigError(f"неизвестные ключи {unknown}", name)

    configs = []
    for i, run in enumerate(suite["runs"]):
        run_name = run.get("name") if isinstance(run, dict) else None
        if not isinstance(run_name, str) or not run_name:
            raise ConfigError("у прогона должно быть имя", f"{name}.runs[{i}].name")
        merged = deep_merge(suite.get("base") or {}, run.get("overrides") or {})
        merged["name"] = f"{name}_{run_name}"
        try:
            configs.append((run_name, parse_config(merged)))
        except ConfigError as e:
            raise ConfigError(str(e), f"{name}.runs[{i}] ({run_name})") from e
    return configs


def figure_suite(name: str, out_dir: str = None, scenarios_dir: Path = SCENARIOS_DIR) -> SuiteResult:
    """
     Прогоняет набор экспериментов.

     Если задан out_dir, пишет по CSV-трассе на прогон, metrics.csv со сводной
     таблицей, а для fig8 ещё и путь модели предсказателя.

     Args:
         name (str): Имя набора (fig3, fig4, fig8, fig10, fig11, fig12).
         out_dir (str, optional): Каталог для результатов.

     Returns:
         SuiteResult: Трассы, показатели и сводная таблица.
     """
    configs = load_suite(name, scenarios_dir)
    logging.info(f"Набор {name}: {len(configs)} прогонов")
    traces = {}
    metrics = {}
    for run_name, config in configs:
        trace = run_scenario(config)
        traces[run_name] = trace
        metrics[run_name] = metrics_for(trace, config)
        logging.info(f"{name}/{run_name}: rms_e={metrics[run_name].rms_e:.4f} м, "
                     f"колебание {'незатухающее' if metrics[run_name].oscillation_sustained else 'затухает'}")

    rows = list(metrics.items())
    if out_dir:
        suite_dir = os.path.join(out_dir, name)
        for run_name, trace in traces.items():
            write_trace(trace, os.path.join(suite_dir, f"{run_name}.csv"))
        if name == "fig8" and MODEL_PATH_RUN in traces:
            write_model_path(traces[MODEL_PATH_RUN], os.path.join(suite_dir, "predictor_model_path.csv"))
        table = write_metrics_table(rows, os.path.join(suite_dir, "metrics.csv"))
    else:
        table = metrics_frame(rows)
    return SuiteResult(name, traces, metrics, table)

