"""
Исключения пакета. Все наследуют ValueError / RuntimeError,
так что вызывающий код может ловить их как обычные ошибки значений.
CLI переводит ValueError в код выхода 2, OSError - в 3.
"""


class MfdpError(Exception):
    """Общий маркер ошибок mfdp."""


class PValueValidationError(MfdpError, ValueError):
    """p-значение вне (0,1] или не конечное."""


class CsvFormatError(MfdpError, ValueError):
    """Битый CSV. Сообщение начинается с 'line N:'."""


class ParameterError(MfdpError, ValueError):
    pass


class WindowRangeError(MfdpError, ValueError):
    """Некорректное окно 𝕋 или порог t вне окна."""


class ScenarioError(MfdpError, ValueError):
    """Структура зависимости не строится (матрица корреляций не PSD и т.п.)."""


class CapacityError(MfdpError, RuntimeError):
    """Перебор подмножеств слишком велик."""
