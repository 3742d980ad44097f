# Тесты mfdp
