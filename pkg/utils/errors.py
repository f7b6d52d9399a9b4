# utils/errors.py

# Иерархия исключений симулятора.
# Все ошибки наследуются от SimulationError, чтобы CLI мог отличить
# "наши" ошибки от непредвиденных сбоев.

# --- Классы модуля ---


class SimulationError(Exception):
    """Базовая ошибка библиотеки."""


class DomainError(SimulationError, ValueError):
    """
     Аргумент вне области определения операции.

     Например: нечисловое значение угла, dt <= 0, скорость v <= 0 для регулятора Stanley.
     """


class PathRangeError(SimulationError, ValueError):
    """Длина дуги s вне диапазона [0, total_length]. Экстраполяция не выполняется."""


class ConfigError(SimulationError, ValueError):
    """
     Ошибка конфигурации сценария.

     Args:
         message (str): Текст ошибки.
         field (str, optional): Путь к полю конфигурации (например, "delays.input_s").
     """

    def __init__(self, message: str, field: str = None):
        self.field = field
        text = f"{field}: {message}" if field else message
        super().__init__(text)


class ConfigParseError(ConfigError):
    """
     Файл конфигурации не удалось разобрать как YAML.

     Args:
         message (str): Текст ошибки парсера.
         line (int, optional): Номер строки (с 1).
         column (int, optional): Номер столбца (с 1).
     """

    def __init__(self, message: str, line: int = None, column: int = None):
        self.line = line
        self.column = column
        where = f" (строка {line}, столбец {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownFigureError(ConfigError):
    """Запрошен неизвестный набор экспериментов (figure suite)."""


class TraceError(SimulationError):
    """Пустая или повреждённая трасса моделирования."""
