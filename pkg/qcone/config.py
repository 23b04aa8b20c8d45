import os
from typing import Dict, List, Literal, Optional, Any

import yaml
from pydantic import BaseModel, Field, model_validator

from .ncalg import Family, Parity
from .schemas import CheckStatus


# Pydantic models validating the structure of catalog.yaml
class GeneratorConfig(BaseModel):
    name: str
    family: Family = Family.COORDINATE
    parity: Parity = Parity.EVEN
    conjugate: Optional[str] = None
    label: str = ""


class TableConfig(BaseModel):
    source: str = ""
    lines: List[str] = Field(default_factory=list)


class PresetConfig(BaseModel):
    description: str = ""
    alphabet: str
    tables: List[str]
    # table substitutions applied when the corrected-typo flag is off
    printed_tables: Dict[str, str] = Field(default_factory=dict)
    derivation: Dict[str, str] = Field(default_factory=dict)


class CatalogConfig(BaseModel):
    alphabets: Dict[str, List[GeneratorConfig]]
    tables: Dict[str, TableConfig]
    presets: Dict[str, PresetConfig]

    @model_validator(mode="after")
    def references_resolve(self):
        for name, preset in self.presets.items():
            if preset.alphabet not in self.alphabets:
                raise ValueError(f"preset '{name}' uses unknown alphabet '{preset.alphabet}'")
            for table in list(preset.tables) + list(preset.printed_tables.values()):
                if table not in self.tables:
                    raise ValueError(f"preset '{name}' uses unknown table '{table}'")
            alphabet = {g.name for g in self.alphabets[preset.alphabet]}
            for source, target in preset.derivation.items():
                if source not in alphabet or target not in alphabet:
                    raise ValueError(f"preset '{name}' differential {source}->{target} leaves the alphabet")
        return self


# Models for suite_config.yaml
class SuiteEntry(BaseModel):
    name: str
    kind: str
    group: str
    preset: Optional[str] = None
    expected: CheckStatus = CheckStatus.PASS
    params: Dict[str, Any] = Field(default_factory=dict)


class SuiteConfig(BaseModel):
    checks: List[SuiteEntry]

    @model_validator(mode="after")
    def names_unique(self):
        names = [entry.name for entry in self.checks]
        if len(names) != len(set(names)):
            raise ValueError("suite check names must be unique")
        return self

    @property
    def groups(self) -> List[str]:
        seen: List[str] = []
        for entry in self.checks:
            if entry.group not in seen:
                seen.append(entry.group)
        return seen


def _load_yaml(filename: str) -> dict:
    config_path = os.path.join(os.path.dirname(__file__), filename)
    with open(config_path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


def load_catalog_config() -> CatalogConfig:
    """Carica, valida e restituisce il catalogo delle relazioni dal file YAML."""
    return CatalogConfig(**_load_yaml("catalog.yaml"))


def load_suite_config() -> SuiteConfig:
    """Carica, valida e restituisce la suite di verifica dal file YAML."""
    return SuiteConfig(**_load_yaml("suite_config.yaml"))


catalog_settings = load_catalog_config()
suite_settings = load_suite_config()


class AppSettings(BaseModel):
    default_max_degree: int = 3
    default_format: Literal["text", "json"] = "text"
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


app_settings = AppSettings()
