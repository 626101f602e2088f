from eharqsim.scenario.scenario import (
    ScenarioInfo,
    all_scenarios,
    choose_scenario,
)
