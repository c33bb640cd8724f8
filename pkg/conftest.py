# Keeps the repository root importable (ifmlab, tools) when running pytest from anywhere.
