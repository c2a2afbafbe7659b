# -*- coding: utf-8 -*-
import logging
from collections.abc import Iterable

import simplejson
from box import Box

import crystalwalk.models
import crystalwalk.schemas
from crystalwalk.lattice import HeightFunction
from crystalwalk.loops import Loop
from crystalwalk.shapes import Shape


class SchemaParser(object):
    """Serialize and deserialize crystalwalk objects"""

    _models = {
        "GraphSummarySchema": crystalwalk.models.GraphSummary,
        "DiffusivityReportSchema": crystalwalk.models.DiffusivityReport,
        "DiffusivityEstimateSchema": crystalwalk.models.DiffusivityEstimate,
        "StripStatisticsSchema": crystalwalk.models.StripStatistics,
        "GateReportSchema": crystalwalk.models.GateReport,
        "SimplexReportSchema": crystalwalk.models.SimplexReport,
        "CountingReportSchema": crystalwalk.models.CountingReport,
        "TauReportSchema": crystalwalk.models.TauReport,
        "SuiteResultSchema": crystalwalk.models.SuiteResult,
        "VerificationReportSchema": crystalwalk.models.VerificationReport,
        "ArtifactSchema": crystalwalk.models.Artifact,
    }

    logger = logging.getLogger(__name__)

    # Deserialization methods
    @classmethod
    def parse_shape(cls, shape, from_string=False, **kwargs):
        """Convert raw JSON string or dictionary to a shape

        Args:
            shape: The raw input
            from_string: True if input is a JSON string, False if a dictionary
            **kwargs: Additional parameters to be passed to the Schema (e.g. many=True)

        Returns:
            A Shape object
        """
        return cls.parse(shape, Shape, from_string=from_string, **kwargs)

    @classmethod
    def parse_loop(cls, loop, from_string=False, **kwargs):
        """Convert raw JSON string or dictionary to a loop

        Args:
            loop: The raw input
            from_string: True if input is a JSON string, False if a dictionary
            **kwargs: Additional parameters to be passed to the Schema (e.g. many=True)

        Returns:
            A Loop object in canonical form
        """
        return cls.parse(loop, Loop, from_string=from_string, **kwargs)

    @classmethod
    def parse_height_function(cls, height_function, from_string=False, **kwargs):
        """Convert raw JSON string or dictionary to a height function

        The full table is rebuilt from the stored down-step set and f(0, 0).
        """
        return cls.parse(height_function, HeightFunction, from_string=from_string, **kwargs)

    @classmethod
    def parse_graph_summary(cls, summary, from_string=False, **kwargs):
        return cls.parse(
            summary, crystalwalk.models.GraphSummary, from_string=from_string, **kwargs
        )

    @classmethod
    def parse_diffusivity_report(cls, report, from_string=False, **kwargs):
        return cls.parse(
            report, crystalwalk.models.DiffusivityReport, from_string=from_string, **kwargs
        )

    @classmethod
    def parse_diffusivity_estimate(cls, estimate, from_string=False, **kwargs):
        return cls.parse(
            estimate, crystalwalk.models.DiffusivityEstimate, from_string=from_string, **kwargs
        )

    @classmethod
    def parse_tau_report(cls, report, from_string=False, **kwargs):
        """Convert raw JSON string or dictionary to a TauReport

        The checked shape is rebuilt as a :class:`~crystalwalk.shapes.Shape`.
        """
        return cls.parse(report, crystalwalk.models.TauReport, from_string=from_string, **kwargs)

    @classmethod
    def parse_verification_report(cls, report, from_string=False, **kwargs):
        return cls.parse(
            report, crystalwalk.models.VerificationReport, from_string=from_string, **kwargs
        )

    @classmethod
    def parse_artifact(cls, artifact, from_string=False, **kwargs):
        """Convert raw JSON string or dictionary to an Artifact

        The ``result`` of the returned artifact is left as plain data.
        """
        return cls.parse(artifact, crystalwalk.models.Artifact, from_string=from_string, **kwargs)

    @classmethod
    def parse(cls, data, model_class, from_string=False, **kwargs):
        """Convert a JSON string or dictionary into a model object

        Args:
            data: The raw input
            model_class: Class object of the desired model type
            from_string: True if input is a JSON string, False if a dictionary
            **kwargs: Additional parameters to be passed to the Schema (e.g. many=True)

        Returns:
            A model object

        """
        if data is None:
            raise TypeError("Data can not be None")

        if from_string and not isinstance(data, str):
            raise TypeError("When from_string=True data must be a string-type")

        schema = getattr(crystalwalk.schemas, model_class.schema)(**kwargs)

        schema.context["models"] = cls._models

        return schema.loads(data) if from_string else schema.load(data)

    # Serialization methods
    @classmethod
    def serialize_shape(cls, shape, to_string=True, **kwargs):
        """Convert a shape into serialized form

        Args:
            shape: The shape(s) to be serialized
            to_string: True to generate a JSON-formatted string, False to generate a
                dictionary
            **kwargs: Additional parameters to be passed to the Schema (e.g. many=True)

        Returns:
            Serialized representation of the shape
        """
        return cls.serialize(shape, to_string=to_string, schema_name=Shape.schema, **kwargs)

    @classmethod
    def serialize_loop(cls, loop, to_string=True, **kwargs):
        return cls.serialize(loop, to_string=to_string, schema_name=Loop.schema, **kwargs)

    @classmethod
    def serialize_height_function(cls, height_function, to_string=True, **kwargs):
        return cls.serialize(
            height_function, to_string=to_string, schema_name=HeightFunction.schema, **kwargs
        )

    @classmethod
    def serialize_diffusivity_report(cls, report, to_string=True, **kwargs):
        return cls.serialize(
            report,
            to_string=to_string,
            schema_name=crystalwalk.models.DiffusivityReport.schema,
            **kwargs
        )

    @classmethod
    def serialize_artifact(cls, artifact, to_string=True, **kwargs):
        """Convert an artifact into serialized form

        Strings are written with sorted keys and a fixed indent, so the same
        artifact always gives the same bytes.

        Args:
            artifact: The Artifact to be serialized
            to_string: True to generate a JSON-formatted string, False to generate a
                dictionary
            **kwargs: Additional parameters to be passed to the Schema

        Returns:
            Serialized representation of the artifact
        """
        schema = crystalwalk.schemas.ArtifactSchema(**kwargs)
        if to_string:
            return schema.dumps(artifact, sort_keys=True, indent=2)
        return schema.dump(artifact)

    @classmethod
    def serialize(cls, model, to_string=False, schema_name=None, **kwargs):
        """Convert a model object or list of models into a dictionary or JSON string.

        - Determine the correct schema to use for serializing. This can be explicitly
          passed as an argument, or it can be determined by inspecting the model to
          serialize.
        - Determine if the model to serialize is a collection or a single object.
            - If it's a single object, serialize it and return that.
            - If it's a collection, construct a list by calling this method for each
              individual item in the collection. Then serialize **that** and return it.

        Args:
            model: The model or model list
            to_string: True to generate a JSON string, False to generate a
                dictionary
            schema_name: Name of schema to use for serializing. If None, will be
            determined by inspecting ``model``
            **kwargs: Additional parameters to be passed to the Schema.
                Note that the 'many' parameter will be set correctly automatically.

        Returns:
            A serialized model representation

        """
        schema_name = schema_name or cls._get_schema_name(model)

        if cls._single_item(model):
            kwargs["many"] = False

            schema = getattr(crystalwalk.schemas, schema_name)(**kwargs)

            return schema.dumps(model, sort_keys=True) if to_string else schema.dump(model)

        # Explicitly force to_string to False so only original call returns a string
        multiple = [
            cls.serialize(x, to_string=False, schema_name=schema_name, **kwargs) for x in model
        ]

        return simplejson.dumps(multiple, sort_keys=True) if to_string else multiple

    @classmethod
    def _get_schema_name(cls, obj):
        """Get the name of the schema to use for a particular object

        Models and geometry classes carry a ``schema`` attribute naming it.

        Args:
            obj: The object to inspect for a schema name

        Returns:
            The schema name, if found. None otherwise.
        """
        return getattr(type(obj), "schema", None)

    @classmethod
    def _single_item(cls, obj):
        """Determine if the object given is a single item or a collection.

        - Models must return True, including iterable ones such as Shape
        - "Standard" collections (list, tuple, set) must return False
        - Dictionaries and Boxes must return True
        """
        if isinstance(obj, (dict, Box)) or cls._get_schema_name(obj):
            return True
        return not isinstance(obj, Iterable)
