"""Exception hierarchy shared by the solver, the simulator and the CLI."""


class SDPError(Exception):
    """Base class for errors raised while building or solving a model."""


class ModelError(SDPError):
    """A model definition is malformed or fails validation."""


class InfeasibleState(SDPError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"no feasible action in state (stage {state.stage}, level {state.level:g})")


class OutOfGrid(SDPError):
    def __init__(self, state, action, outcome, level):
        self.state = state
        self.action = action
        self.outcome = outcome
        self.level = level
        super().__init__(
            f"transition leaves the state grid: (stage {state.stage}, level {state.level:g}), "
            f"action {action:g}, outcome {outcome:g} -> level {level:g}"
        )


class NotSolved(SDPError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"state (stage {state.stage}, level {state.level:g}) has not been solved")


class PolicyGap(SDPError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"policy has no action for state (stage {state.stage}, level {state.level:g})")
