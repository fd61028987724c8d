# Smoke tests package
