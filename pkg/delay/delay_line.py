# delay/delay_line.py

# Звено чистого запаздывания на целое число шагов k.
# Используется для задержки команд руления (вход) и обратной связи по состоянию (выход).

from collections import deque
from typing import Deque, Generic, TypeVar

from utils.errors import ConfigError

T = TypeVar("T")


class DelayLine(Generic[T]):
    """
     Очередь FIFO фиксированной длины k.

     До того как поступят k значений, на выходе fill_value.
     При k = 0 звено тождественно.

     Args:
         k (int): Запаздывание в шагах, k >= 0.
         fill_value: Начальное содержимое очереди.
     """

    def __init__(self, k: int, fill_value: T):
        if k < 0 or int(k) != k:
            raise ConfigError(f"запаздывание должно быть целым >= 0, получено {k}", "delays")
        self.k = int(k)
        self.fill_value = fill_value
        self._buffer: Deque[T] = deque([fill_value] * self.k)

    def __len__(self):
        return len(self._buffer)

    def push(self, value: T) -> T:
        if self.k == 0:
            return value
        self._buffer.append(value)
        return self._buffer.popleft()


def delay_push(line: DelayLine[T], value: T) -> T:
    """Кладёт value в линию и возвращает значение, поступившее k шагов назад."""
    return line.push(value)
