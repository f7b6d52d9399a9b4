# main.py

# Командная строка симулятора слежения за траекторией с компенсацией запаздывания.
#
#   python main.py run <config.yaml> [--out DIR] [--debug]  один сценарий -> CSV-трасса
#   python main.py figure <fig3|fig4|fig8|fig10|fig11|fig12> [--out DIR]
#   python main.py metrics <trace.csv>                показатели по сохранённой трассе
#   python main.py validate <config.yaml>             только проверка конфигурации
#   python main.py defaults                           встроенные значения по умолчанию
#
# Код возврата: 0 - успех, 2 - ошибка конфигурации, 1 - прочие ошибки.

import argparse
import logging
import os
import sys

import yaml

from harness.figures import FIGURES, figure_suite
from harness.metrics import compute_metrics, metrics_for
from harness.scenario_config import defaults_dict, read_config
from harness.simulation import run_scenario
from storage.trace_store import read_trace, write_debug_trace, write_trace
from utils.errors import ConfigError, SimulationError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2


# --- Команды ---

def _print_metrics(metrics):
    for name, value in metrics._asdict().items():
        print(f"{name}: {value}")


def cmd_run(args) -> int:
    config = read_config(args.config)
    trace = run_scenario(config)
    out_path = os.path.join(args.out, f"{config.name}.csv")
    write_trace(trace, out_path)
    if args.debug:
        write_debug_trace(trace, os.path.join(args.out, f"{config.name}.debug.csv"))
    _print_metrics(metrics_for(trace, config))
    print(f"Трасса: {out_path}")
    return EXIT_OK


def cmd_figure(args) -> int:
    result = figure_suite(args.name, args.out)
    print(result.table)
    print(f"Результаты: {os.path.join(args.out, args.name)}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    _print_metrics(compute_metrics(read_trace(args.trace)))
    return EXIT_OK


def cmd_validate(args) -> int:
    config = read_config(args.config)
    print(f"Конфигурация '{config.name}' корректна: {config.steps + 1} строк трассы, "
          f"запаздывание вход/выход {config.delays.steps(config.dt_s)} шагов")
    return EXIT_OK


def cmd_defaults(args) -> int:
    print(yaml.safe_dump(defaults_dict(), allow_unicode=True, sort_keys=False))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Моделирование слежения за траекторией с компенсацией запаздывания")
    parser.add_argument("--verbose", action="store_true", help="подробный журнал (DEBUG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="прогнать один сценарий")
    p.add_argument("config")
    p.add_argument("--out", default="results")
    p.add_argument("--debug", action="store_true", help="записать также y_del и очередь предсказателя")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("figure", help="прогнать набор экспериментов")
    p.add_argument("name", choices=FIGURES)
    p.add_argument("--out", default="results")
    p.set_defaults(handler=cmd_figure)

    p = sub.add_parser("metrics", help="показатели по CSV-трассе")
    p.add_argument("trace")
    p.set_defaults(handler=cmd_metrics)

    p = sub.add_parser("validate", help="проверить конфигурацию")
    p.add_argument("config")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("defaults", help="напечатать значения по умолчанию")
    p.set_defaults(handler=cmd_defaults)
    return parser


def main(argv=None) -> int:
    """
     Точка входа.

     Returns:
         int: Код возврата процесса.
     """
    args = build_parser().parse_args(argv)

    # Настройка логирования.
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s - %(levelname)s - %(message)s')
    try:
        return args.handler(args)
    except ConfigError as e:
        print(f"Ошибка конфигурации: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except SimulationError as e:
        print(f"Ошибка: {e}", file=sys.stderr)
        return EXIT_FAILURE


# --- Точка входа ---
if __name__ == "__main__":
    sys.exit(main())
