from rest_framework import serializers

from analysis.scenario import LEARNING_RATE_MODES, Scenario
from core.exceptions import (
    BadRowSum,
    DetectionLabError,
    DimensionMismatch,
    InvalidLikelihood,
    InvalidMixingMatrix,
    IsolatedAgent,
    NotConnected,
    NotIdentifiable,
    ZeroLikelihoodEntry,
)
from experiments.models import ExperimentRun
from network.graphs import GRAPH_FAMILIES, Graph, graph_from_family
from network.matrices import MixingMatrix, metropolis_matrix
from network.processes import FiniteSupportProcess, FixedProcess, GossipProcess
from signal_model.likelihoods import SignalModel

PROCESS_KINDS = ("fixed", "metropolis", "gossip", "finite_support")
MAX_AGENTS = 500
MAX_MIXING_TIME = 100_000

# Most specific class first.
ASSUMPTIONS = (
    (NotIdentifiable, "global identifiability"),
    (ZeroLikelihoodEntry, "bounded log-likelihoods"),
    (BadRowSum, "likelihood rows summing to one"),
    (NotConnected, "connectivity in expectation"),
    (IsolatedAgent, "connectivity in expectation"),
    (InvalidMixingMatrix, "doubly stochastic mixing"),
    (InvalidLikelihood, "well-formed likelihood tables"),
    (DimensionMismatch, "consistent dimensions"),
)


def assumption_error(exc):
    """Turn a domain error into a validation error naming the violated assumption."""
    for error_class, assumption in ASSUMPTIONS:
        if isinstance(exc, error_class):
            return serializers.ValidationError(f"{assumption} violated: {exc} ({type(exc).__name__})")
    return serializers.ValidationError(f"{exc} ({type(exc).__name__})")


def matrix_field(**kwargs):
    return serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(), allow_empty=False, max_length=MAX_AGENTS),
        allow_empty=False,
        max_length=MAX_AGENTS,
        **kwargs,
    )


def mixing_times_field():
    return serializers.ListField(
        child=serializers.IntegerField(min_value=1, max_value=MAX_MIXING_TIME),
        allow_empty=False,
        default=lambda: [1, 10, 100, 1000],
    )


class SignalModelSerializer(serializers.Serializer):
    """Per-agent likelihood tables; validates into a SignalModel."""
    true_state = serializers.IntegerField(min_value=0, default=0)
    agents = serializers.ListField(child=matrix_field(), min_length=2)

    def validate(self, attrs):
        try:
            attrs["model"] = SignalModel.from_tables(attrs["agents"], attrs["true_state"])
        except (DetectionLabError, ValueError) as exc:
            raise assumption_error(exc)
        return attrs


class GraphFamilySerializer(serializers.Serializer):
    family = serializers.ChoiceField(choices=sorted(GRAPH_FAMILIES))
    n = serializers.IntegerField(min_value=2, max_value=MAX_AGENTS)


class SupportEntrySerializer(serializers.Serializer):
    matrix = matrix_field()
    probability = serializers.FloatField(min_value=0.0, max_value=1.0)


class NetworkSerializer(serializers.Serializer):
    """
    A network process section. Validates into attrs["process"].
    Pass context={"require_connected": False} to accept networks that are
    disconnected in expectation (spectral reports).
    """
    kind = serializers.ChoiceField(choices=PROCESS_KINDS)
    n = serializers.IntegerField(min_value=2, max_value=MAX_AGENTS, required=False)
    edges = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=2, max_length=2),
        max_length=MAX_AGENTS * (MAX_AGENTS - 1) // 2,
        required=False,
    )
    graph = GraphFamilySerializer(required=False)
    matrix = matrix_field(required=False)
    support = SupportEntrySerializer(many=True, required=False)

    def _graph(self, attrs):
        if "graph" in attrs and "edges" in attrs:
            raise serializers.ValidationError("give either edges or graph, not both")
        if "graph" in attrs:
            return graph_from_family(attrs["graph"]["family"], attrs["graph"]["n"])
        if "edges" not in attrs:
            raise serializers.ValidationError(f"kind {attrs['kind']} needs edges or graph")
        if "n" not in attrs:
            raise serializers.ValidationError({"n": "required when edges are listed"})
        return Graph.from_edges(attrs["n"], attrs["edges"])

    def validate(self, attrs):
        kind = attrs["kind"]
        require_connected = self.context.get("require_connected", True)
        try:
            if kind == "fixed":
                if "matrix" not in attrs:
                    raise serializers.ValidationError({"matrix": "required for kind fixed"})
                process = FixedProcess(MixingMatrix(attrs["matrix"]), require_connected)
            elif kind == "metropolis":
                process = FixedProcess(metropolis_matrix(self._graph(attrs)), require_connected)
            elif kind == "gossip":
                process = GossipProcess(self._graph(attrs), require_connected)
            else:
                if not attrs.get("support"):
                    raise serializers.ValidationError({"support": "required for kind finite_support"})
                process = FiniteSupportProcess(
                    tuple(MixingMatrix(entry["matrix"]) for entry in attrs["support"]),
                    [entry["probability"] for entry in attrs["support"]],
                    require_connected,
                )
        except (DetectionLabError, ValueError) as exc:
            raise assumption_error(exc)
        if "n" in attrs and attrs["n"] != process.n:
            raise serializers.ValidationError({"n": f"declared {attrs['n']} agents, network has {process.n}"})
        attrs["process"] = process
        return attrs


class LearningRateSerializer(serializers.Serializer):
    mode = serializers.ChoiceField(choices=LEARNING_RATE_MODES, default="auto")
    value = serializers.FloatField(required=False)

    def validate(self, attrs):
        if attrs["mode"] == "explicit" and not attrs.get("value", 0) > 0:
            raise serializers.ValidationError({"value": "explicit mode needs a positive value"})
        return attrs


class OutputSerializer(serializers.Serializer):
    directory = serializers.CharField(required=False)


class ScenarioSerializer(serializers.Serializer):
    """
    Validates a scenario file and builds the runnable Scenario.
    save() accepts config_digest and source, which are stored on the Scenario.
    """
    name = serializers.CharField(max_length=255)
    signal_model = SignalModelSerializer()
    network = NetworkSerializer()
    horizon = serializers.IntegerField(min_value=1)
    learning_rate = LearningRateSerializer(required=False)
    delta = serializers.FloatField(default=0.1)
    checkpoints = serializers.ListField(child=serializers.IntegerField(min_value=1), default=list)
    trials = serializers.IntegerField(min_value=1, default=1)
    seed = serializers.IntegerField(min_value=0, default=0)
    rate_window = serializers.ListField(
        child=serializers.IntegerField(min_value=1), min_length=2, max_length=2, required=False
    )
    mixing_times = mixing_times_field()
    output = OutputSerializer(required=False)

    def validate_delta(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("delta must lie in (0, 1)")
        return value

    def validate(self, attrs):
        model = attrs["signal_model"]["model"]
        process = attrs["network"]["process"]
        if model.n != process.n:
            raise serializers.ValidationError(
                f"consistent dimensions violated: signal model has {model.n} agents, network has {process.n}"
            )
        horizon = attrs["horizon"]
        late = [t for t in attrs["checkpoints"] if t > horizon]
        if late:
            raise serializers.ValidationError({"checkpoints": f"checkpoints {late} exceed horizon {horizon}"})
        window = attrs.get("rate_window")
        if window and not window[0] < window[1] <= horizon:
            raise serializers.ValidationError({"rate_window": f"need t1 < t2 <= {horizon}, got {window}"})
        return attrs

    def create(self, validated_data):
        learning_rate = validated_data.get("learning_rate", {"mode": "auto"})
        window = validated_data.get("rate_window")
        return Scenario(
            name=validated_data["name"],
            model=validated_data["signal_model"]["model"],
            process=validated_data["network"]["process"],
            horizon=validated_data["horizon"],
            delta=validated_data["delta"],
            checkpoints=tuple(validated_data["checkpoints"]),
            trials=validated_data["trials"],
            seed=validated_data["seed"],
            learning_rate_mode=learning_rate["mode"],
            learning_rate_value=learning_rate.get("value"),
            rate_window=tuple(window) if window else None,
            mixing_times=tuple(validated_data["mixing_times"]),
            output_directory=validated_data.get("output", {}).get("directory"),
            config_digest=validated_data.get("config_digest", ""),
            source=validated_data.get("source"),
        )


class SpectralRequestSerializer(serializers.Serializer):
    """A network section plus the t values of the mixing-deviation table."""
    network = NetworkSerializer()
    mixing_times = mixing_times_field()

    def __init__(self, *args, **kwargs):
        context = kwargs.setdefault("context", {})
        context.setdefault("require_connected", False)
        super().__init__(*args, **kwargs)


class CostBoundInputSerializer(serializers.Serializer):
    """Inputs of the decentralization cost bound."""
    B = serializers.FloatField()
    I = serializers.FloatField()
    m = serializers.IntegerField()
    n = serializers.IntegerField()
    delta = serializers.FloatField()
    sigma2 = serializers.FloatField()


class TVBoundInputSerializer(CostBoundInputSerializer):
    """Inputs of the TV error bound at time t."""
    t = serializers.IntegerField()


class ExperimentRunSerializer(serializers.ModelSerializer):
    """Serializer for recorded lab runs."""

    class Meta:
        model = ExperimentRun
        fields = (
            'id', 'command', 'scenario_name', 'config_digest', 'seed', 'trials',
            'which', 'status', 'summary', 'output_dir', 'created_at'
        )
        read_only_fields = fields
