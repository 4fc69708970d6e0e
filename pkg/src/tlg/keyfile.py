"""
Arquivo de chave (``*.key.json``): a máscara de Vt que separa entradas reais de decoys.

Formato:
    {"format": "tlg-key/1", "seed": 42,
     "instances": {"tlg_q": {"variant": {"n": 5, "k": 2},
                             "left":  [{"signal": "a", "polarity": "complemented", "vt": "LOW"}, ...],
                             "right": [...]}}}

Slots TIE usam ``signal`` "0" ou "1" com polaridade "true". Níveis de uma macro
de dois níveis são nomeados ``<instância>.0`` e ``<instância>.1``.
"""
import json
from typing import Any, Dict, List

from src.errors import ContractError
from src.tlg.obfuscate import InstanceKey, ObfuscationKey
from src.tlg.slots import CellVariant, Drive, Slot, VtClass

KEY_FORMAT = "tlg-key/1"


def _slot_to_json(slot: Slot) -> Dict[str, str]:
    if slot.drive is Drive.SIGNAL:
        signal, polarity = slot.net, "complemented" if slot.complemented else "true"
    else:
        signal, polarity = slot.token, "true"
    return {"signal": signal, "polarity": polarity, "vt": slot.vt.value}


def _slot_from_json(item: Dict[str, Any]) -> Slot:
    try:
        signal, polarity, vt = item["signal"], item["polarity"], VtClass(item["vt"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractError(f"Malformed key slot {item!r}") from exc
    if polarity not in ("true", "complemented"):
        raise ContractError(f"Unknown polarity {polarity!r}")
    if signal == "0":
        return Slot.tie0(vt)
    if signal == "1":
        return Slot.tie1(vt)
    return Slot.signal(signal, polarity == "complemented", vt)


def key_to_dict(key: ObfuscationKey) -> Dict[str, Any]:
    return {
        "format": KEY_FORMAT,
        "seed": key.seed,
        "instances": {
            name: {
                "variant": {"n": entry.variant.n, "k": entry.variant.k},
                "left": [_slot_to_json(s) for s in entry.left],
                "right": [_slot_to_json(s) for s in entry.right],
            }
            for name, entry in sorted(key.entries.items())
        },
    }


def key_from_dict(data: Dict[str, Any]) -> ObfuscationKey:
    if not isinstance(data, dict) or data.get("format") != KEY_FORMAT:
        raise ContractError(f"Not a {KEY_FORMAT} key document")
    key = ObfuscationKey(seed=data.get("seed"))
    for name, item in data.get("instances", {}).items():
        try:
            variant = CellVariant(int(item["variant"]["n"]), int(item["variant"]["k"]))
            left: List[Slot] = [_slot_from_json(s) for s in item["left"]]
            right: List[Slot] = [_slot_from_json(s) for s in item["right"]]
        except (KeyError, TypeError) as exc:
            raise ContractError(f"Malformed key entry '{name}'") from exc
        key.add(name, InstanceKey(tuple(left), tuple(right), variant))
    return key


def dump_key(key: ObfuscationKey, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(key_to_dict(key), f, indent=2, sort_keys=True)
        f.write("\n")


def load_key(path: str) -> ObfuscationKey:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ContractError(f"Key file {path} is not valid JSON: {exc}") from exc
    return key_from_dict(data)
