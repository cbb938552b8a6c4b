"""Dataclass <-> JSON document layer.

Every document nflab reads or writes (function sets, probability vectors,
neighborhoods, guards, reports) is a dataclass inheriting JsonSchemaMixin.
The JSON schema is derived from the type hints and checked with
jsonschema's Draft 7 validator.
"""
import functools
import threading
from dataclasses import MISSING, Field, fields
from enum import Enum
from fractions import Fraction
from typing import (
    Any,
    Callable,
    ClassVar,
    Dict,
    Generic,
    Hashable,
    List,
    Optional,
    Tuple,
    Type,
    TypeVar,
    Union,
    cast,
    get_args,
    get_origin,
    get_type_hints,
)

import jsonschema

from nflab.helpers import RATIONAL_PATTERN, format_fraction, parse_fraction

JSON_ENCODABLE_TYPES = {
    str: {"type": "string"},
    int: {"type": "integer"},
    bool: {"type": "boolean"},
    float: {"type": "number"},
    type(None): {"type": "null"},
}

JsonEncodable = Union[int, float, str, bool, None]
JsonDict = Dict[str, Any]

DRAFT7 = "http://json-schema.org/draft-07/schema#"


class ValidationError(jsonschema.ValidationError):
    pass


def issubclass_safe(klass: Any, base: Type) -> bool:
    try:
        return issubclass(klass, base)
    except TypeError:
        return False


def is_enum(field_type: Any) -> bool:
    return issubclass_safe(field_type, Enum)


def is_optional(field_type: Any) -> bool:
    return get_origin(field_type) is Union and type(None) in get_args(
        field_type
    )


TV = TypeVar("TV")


class FieldEncoder(Generic[TV]):
    """Base class for encoding fields to and from JSON encodable values"""

    def to_wire(self, value: TV) -> JsonEncodable:
        return value  # type: ignore

    def to_python(self, value: JsonEncodable) -> TV:
        return value  # type: ignore

    @property
    def json_schema(self) -> JsonDict:
        raise NotImplementedError()


class FractionEncoder(FieldEncoder[Fraction]):
    """Exact rationals travel as "p/q" strings"""

    def to_wire(self, value: Fraction) -> str:
        return format_fraction(value)

    def to_python(self, value: JsonEncodable) -> Fraction:
        if isinstance(value, Fraction):
            return value
        return parse_fraction(cast(str, value))

    @property
    def json_schema(self) -> JsonDict:
        return {"type": "string", "pattern": RATIONAL_PATTERN}


T = TypeVar("T", bound="JsonSchemaMixin")

_Codec = Callable[[Any], Any]

_SCHEMA_LOCK = threading.RLock()


@functools.lru_cache()
def _validate_schema(h_schema_cls: Hashable) -> JsonDict:
    schema_cls = cast(Type[JsonSchemaMixin], h_schema_cls)
    schema = schema_cls.json_schema()
    jsonschema.Draft7Validator.check_schema(schema)
    return schema


class JsonSchemaMixin:
    """Mixin which adds methods to generate a JSON schema and
    convert to and from JSON encodable dicts with validation against the schema
    """

    _field_encoders: ClassVar[Dict[Any, FieldEncoder]] = {
        Fraction: FractionEncoder(),
    }

    # per-class caches, keyed by the concrete class
    _schemas: ClassVar[Dict[type, Tuple[JsonDict, JsonDict]]] = {}
    _mapped_fields: ClassVar[Dict[type, List[Tuple[Field, str]]]] = {}

    ADDITIONAL_PROPERTIES: ClassVar[bool] = False

    @classmethod
    def field_mapping(cls) -> Dict[str, str]:
        """Defines the mapping of python field names to JSON field names."""
        return {}

    @classmethod
    def register_field_encoders(cls, field_encoders: Dict[Any, FieldEncoder]):
        """Registers additional custom field encoders. If called on the base,
        these are added globally.
        """
        if cls is not JsonSchemaMixin:
            cls._field_encoders = {**cls._field_encoders, **field_encoders}
        else:
            cls._field_encoders.update(field_encoders)

    @classmethod
    def _get_fields(cls) -> List[Tuple[Field, str]]:
        if cls not in cls._mapped_fields:
            type_hints = get_type_hints(cls)
            mapped = []
            for f in fields(cls):  # type: ignore
                if f.name.startswith("_"):
                    continue
                # fields() doesn't resolve forward refs
                f.type = type_hints[f.name]
                mapped.append((f, cls.field_mapping().get(f.name, f.name)))
            cls._mapped_fields[cls] = mapped
        return cls._mapped_fields[cls]

    # encoding

    @classmethod
    def _encode_field(cls, field_type: Any, value: Any, omit_none: bool):
        if value is None:
            return None
        if field_type in cls._field_encoders:
            return cls._field_encoders[field_type].to_wire(value)

        origin, args = get_origin(field_type), get_args(field_type)
        if origin is Union:
            errors = []
            for variant in args:
                if variant is type(None):
                    continue
                try:
                    return cls._encode_field(variant, value, omit_none)
                except (TypeError, AttributeError, ValueError) as exc:
                    errors.append(exc)
            raise TypeError(
                f"No variant of '{field_type}' matched {type(value)}: "
                f"{errors}"
            )
        if origin in (list, tuple):
            if not isinstance(value, (list, tuple)):
                # TypeError so the union encoder moves on
                raise TypeError(f"expected a sequence, got {type(value)}")
            if origin is tuple and (len(args) != 2 or args[1] is not ...):
                return [
                    cls._encode_field(arg, v, omit_none)
                    for arg, v in zip(args, value)
                ]
            return [cls._encode_field(args[0], v, omit_none) for v in value]
        if origin is dict:
            return {
                cls._encode_field(args[0], k, omit_none): cls._encode_field(
                    args[1], v, omit_none
                )
                for k, v in value.items()
            }
        if is_enum(field_type):
            return value.value
        if issubclass_safe(field_type, JsonSchemaMixin):
            return value.to_dict(omit_none=omit_none)
        accepted = (int, float) if field_type is float else field_type
        if field_type in JSON_ENCODABLE_TYPES and not isinstance(
            value, accepted
        ):
            raise TypeError(f"expected {field_type}, got {type(value)}")
        return value

    def to_dict(
        self, omit_none: bool = True, validate: bool = False
    ) -> JsonDict:
        """Converts the dataclass instance to a JSON encodable dict, with
        optional JSON schema validation.

        If omit_none (default True) is specified, any items with value None
        are removed
        """
        data = {}
        for field, target_field in self._get_fields():
            value = self._encode_field(
                field.type, getattr(self, field.name), omit_none
            )
            if omit_none and value is None:
                continue
            data[target_field] = value
        if validate:
            self.validate(data)
        return data

    # decoding

    @classmethod
    def _decode_field(cls, name: str, field_type: Any, value: Any) -> Any:
        if value is None:
            return None
        if field_type in cls._field_encoders:
            return cls._field_encoders[field_type].to_python(value)

        origin, args = get_origin(field_type), get_args(field_type)
        if origin is Union:
            errors: Dict[str, Exception] = {}
            for variant in args:
                if variant is type(None):
                    continue
                try:
                    return cls._decode_field(name, variant, value)
                except (TypeError, ValueError, ValidationError) as exc:
                    errors[str(variant)] = exc
            raise ValidationError(
                f"Unable to decode value for '{name}': no members matched: "
                f"{errors}"
            )
        if origin in (list, tuple):
            if not isinstance(value, (list, tuple)):
                raise TypeError(f"expected a sequence for '{name}'")
            if origin is list or (len(args) == 2 and args[1] is ...):
                items = [cls._decode_field(name, args[0], v) for v in value]
            else:
                items = [
                    cls._decode_field(name, arg, v)
                    for arg, v in zip(args, value)
                ]
            return items if origin is list else tuple(items)
        if origin is dict:
            return {
                cls._decode_field(name, args[0], k): cls._decode_field(
                    name, args[1], v
                )
                for k, v in value.items()
            }
        if is_enum(field_type):
            return field_type(value)
        if issubclass_safe(field_type, JsonSchemaMixin):
            return field_type.from_dict(value, validate=False)
        if field_type in JSON_ENCODABLE_TYPES or field_type is Any:
            return value
        raise ValidationError(
            f"Unable to decode value for '{name}: {field_type}' "
            f"(value={value})"
        )

    @classmethod
    def from_dict(cls: Type[T], data: JsonDict, validate=True) -> T:
        """Returns a dataclass instance with all nested classes converted
        from the dict given"""
        if validate:
            cls.validate(data)

        init_values: Dict[str, Any] = {}
        for field, target_field in cls._get_fields():
            if not field.init:
                continue
            required = (
                field.default is MISSING
                and field.default_factory is MISSING  # type: ignore
            )
            if target_field in data or required:
                init_values[field.name] = cls._decode_field(
                    field.name, field.type, data.get(target_field)
                )
        return cls(**init_values)  # type: ignore

    # schema generation

    @classmethod
    def _schema_for_type(cls, target: Any, definitions: JsonDict) -> JsonDict:
        if target in cls._field_encoders:
            return dict(cls._field_encoders[target].json_schema)

        origin, args = get_origin(target), get_args(target)
        if origin is Union:
            return {
                "oneOf": [cls._schema_for_type(a, definitions) for a in args]
            }
        if origin is list or (
            origin is tuple and len(args) == 2 and args[1] is ...
        ):
            schema: JsonDict = {"type": "array"}
            if args and args[0] is not Any:
                schema["items"] = cls._schema_for_type(args[0], definitions)
            return schema
        if origin is tuple:
            return {
                "type": "array",
                "minItems": len(args),
                "maxItems": len(args),
                "items": [cls._schema_for_type(a, definitions) for a in args],
            }
        if origin is dict:
            schema = {"type": "object"}
            if args[1] is not Any:
                schema["additionalProperties"] = cls._schema_for_type(
                    args[1], definitions
                )
            return schema
        if is_enum(target):
            values = [member.value for member in target]
            member_types = {type(v) for v in values}
            if len(member_types) != 1:
                raise ValidationError(
                    "Invalid schema defined: Found multiple member types - "
                    f"{member_types!s}"
                )
            return {**JSON_ENCODABLE_TYPES[member_types.pop()], "enum": values}
        if issubclass_safe(target, JsonSchemaMixin):
            name = target.__name__
            if name not in definitions:
                # placeholder first, so recursive types terminate
                definitions[name] = {}
                definitions[name] = target._collect_json_schema(definitions)
            return {"$ref": f"#/definitions/{name}"}
        if target in JSON_ENCODABLE_TYPES:
            return dict(JSON_ENCODABLE_TYPES[target])
        if target is Any:
            return {}
        raise ValidationError(f"Unable to create schema for '{target}'")

    @classmethod
    def _collect_json_schema(cls, definitions: JsonDict) -> JsonDict:
        properties = {}
        required = []
        for field, target_field in cls._get_fields():
            prop = cls._schema_for_type(field.type, definitions)
            has_default = (
                field.default is not MISSING
                or field.default_factory is not MISSING  # type: ignore
            )
            if field.default not in (MISSING, None):
                prop["default"] = cls._encode_field(
                    field.type, field.default, omit_none=False
                )
            if field.metadata and "description" in field.metadata:
                prop["description"] = field.metadata["description"]
            properties[target_field] = prop
            if not has_default and not is_optional(field.type):
                required.append(target_field)

        schema = {
            "type": "object",
            "required": required,
            "properties": properties,
            "additionalProperties": cls.ADDITIONAL_PROPERTIES,
        }
        if cls.__doc__:
            schema["description"] = cls.__doc__
        return schema

    @classmethod
    def json_schema(cls, embeddable: bool = False) -> JsonDict:
        """Returns the JSON schema for the dataclass, along with the schema
        of any nested dataclasses within the 'definitions' field.
        """
        with _SCHEMA_LOCK:
            if cls not in cls._schemas:
                definitions: JsonDict = {}
                schema = cls._collect_json_schema(definitions)
                cls._schemas[cls] = (schema, definitions)
            schema, definitions = cls._schemas[cls]

        if embeddable:
            return {**definitions, cls.__name__: schema}
        return {**schema, "definitions": definitions, "$schema": DRAFT7}

    @classmethod
    def validate(cls, data: Any):
        schema = _validate_schema(cast(Hashable, cls))
        validator = jsonschema.Draft7Validator(schema)
        error = next(iter(validator.iter_errors(data)), None)
        if error is not None:
            raise ValidationError.create_from(error) from error
