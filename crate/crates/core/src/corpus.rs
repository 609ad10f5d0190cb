//! The built-in aircraft engine controller requirement set: 14 parents,
//! 28 children, 20 test scenarios, a glossary and abstraction mappings.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::decimal::Decimal;
use crate::model::{
    Project, RequirementId, RequirementRecord, Value, ValueType, VarKind, VariableDecl,
};
use crate::parser::parse_expr;
use crate::refinement::{AbstractionMapping, Definition};

/// A prose test case attached to a requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioRecord {
    pub id: String,
    pub requirement_id: RequirementId,
    pub preconditions: String,
    pub input_steps: String,
    pub expected_results: String,
}

pub const USE_CASE: &str = "UC5";

/// (index, text, natural-language source)
const PARENTS: [(&str, &str, &str); 14] = [
    ("1", "if ((sensorfaults) & (trackingPilotCommands)) Controller shall (controlObjectives)", "Under sensor faults, while tracking pilot commands, control objectives shall be satisfied (e.g., settling time, overshoot, and steady state error will be within predefined, acceptable limits)"),
    ("2", "if ((sensorfaults) & (!trackingPilotCommands)) Controller shall (controlObjectives)", "Under sensor faults, during regulation of nominal system operation (no change in pilot input), control objectives shall be satisfied (e.g., settling time, overshoot, and steady state error will be within predefined, acceptable limits)"),
    ("3", "if ((sensorfaults) & (trackingPilotCommands)) Controller shall (operatingLimitObjectives)", "Under sensor faults, while tracking pilot commands, operating limit objectives shall be satisfied (e.g., respecting upper limit in shaft speed)"),
    ("4", "if ((sensorfaults) & (!trackingPilotCommands)) Controller shall (operatingLimitObjectives)", "Under sensor faults, during regulation of nominal system operation (no change in pilot input), operating limit objectives shall be satisfied (e.g., respecting upper limit in shaft speed)"),
    ("5", "if ((mechanicalFatigue) & (trackingPilotCommands)) Controller shall (controlObjectives)", "Under mechanical fatigue conditions, while tracking pilot commands, control objectives shall be satisfied (e.g., settling time, overshoot, and steady state error will be within predefined, acceptable limits)"),
    ("6", "if ((mechanicalFatigue) & (!trackingPilotCommands)) Controller shall (controlObjectives)", "Under mechanical fatigue conditions, during regulation of nominal system operation (no change in pilot input), control objectives shall be satisfied (e.g., settling time, overshoot, and steady state error will be within predefined, acceptable limits)"),
    ("7", "if ((mechanicalFatigue) & (trackingPilotCommands)) Controller shall (operatingLimitObjectives)", "Under mechanical fatigue conditions, while tracking pilot commands, operating limit objectives shall be satisfied (e.g., respecting upper limit in shaft speed)"),
    ("8", "if ((mechanicalFatigue) & (!trackingPilotCommands)) Controller shall (operatingLimitObjectives)", "Under mechanical fatigue conditions, during regulation of nominal system operation (no change in pilot input), operating limit objectives shall be satisfied (e.g., respecting upper limit in shaft speed)"),
    ("9", "if ((lowProbabilityHazardousEvents) & (trackingPilotCommands)) Controller shall (controlObjectives)", "Under low probability hazardous events, while tracking pilot commands, control objectives shall be satisfied (e.g., settling time, overshoot, and steady state error will be within predefined, acceptable limits)"),
    ("10", "if ((lowProbabilityHazardousEvents) & (!trackingPilotCommands)) Controller shall (controlObjectives)", "Under low probability hazardous events, during regulation of nominal system operation (no change in pilot input), control objectives shall be satisfied (e.g., settling time, overshoot, and steady state error will be within predefined, acceptable limits)"),
    ("11", "if ((lowProbabilityHazardousEvents) & (trackingPilotCommands)) Controller shall (operatingLimitObjectives)", "Under low probability hazardous events, while tracking pilot commands, operating limit objectives shall be satisfied (e.g., respecting upper limit in shaft speed)"),
    ("12", "if ((lowProbabilityHazardousEvents) & (!trackingPilotCommands)) Controller shall (operatingLimitObjectives)", "Under low probability hazardous events, during regulation of nominal system operation (no change in pilot input), operating limit objectives shall be satisfied (e.g., respecting upper limit in shaft speed)"),
    ("13", "if (trackingPilotCommands) Controller shall (changeMode(nominal)) | (changeMode(surgeStallPrevention))", "While tracking pilot commands, controller operating mode shall appropriately switch between nominal and surge / stall prevention operating state"),
    ("14", "if (!trackingPilotCommands) Controller shall (changeMode(nominal)) | (changeMode(surgeStallPrevention))", "During regulation of nominal system operation (no change in pilot input), controller operating mode shall appropriately switch between nominal and surge / stall prevention operating state"),
];

/// (index, parent index, text, comments)
const CHILDREN: [(&str, &str, &str, &str); 28] = [
    ("1.1", "1", "when (diff(r(i),y(i)) > E) if((sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null) & (pilotInput => setThrust = V2)  & (observedThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (settlingTime >= 0) & (settlingTime <= settlingTimeMax) & (observedThrust = V2)", ""),
    ("1.2", "1", "when (diff(r(i),y(i)) > E) if((sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null)& (pilotInput => setThrust = V2) & (observedThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (overshoot >= 0) & (overshoot <= overshootMax) & (observedThrust = V2)", ""),
    ("1.3", "1", "when (diff(r(i),y(i)) > E) if((sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null)& (pilotInput => setThrust = V2)& (observedThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (steadyStateError >= 0) & (steadyStateError <= steadyStateErrorMax) & (observedThrust = V2)", ""),
    ("2.1", "2", "when (diff(r(i),y(i)) > E) if((sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null)& (!pilotInput => setThrust = V1)& (observedThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (settlingTime >= 0) & (settlingTime <= settlingTimeMax) & (observedThrust = V1)", ""),
    ("2.2", "2", "when (diff(r(i),y(i)) > E) if((sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null)& (!pilotInput => setThrust = V1)& (observedThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (overshoot >= 0) & (overshoot <= overshootMax) & (observedThrust = V1)", ""),
    ("2.3", "2", "when (diff(r(i),y(i)) > E) if((sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null)& (!pilotInput => setThrust = V1)& (observedThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (steadyStateError  >= 0) & (steadyStateError  <= steadyStateErrorMax) & (observedThrust = V1)", "Normalized: the printed token `steadyStateError Max` is read as `steadyStateErrorMax`."),
    ("3.1", "3", "when (diff(r(i),y(i)) > E) if((sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null) & (observedThrust = V1))& (pilotInput => setThrust = V2)   Controller shall until (diff(r(i),y(i)) < e) (shaftSpeed >= operatingLowerBound) & (shaftSpeed <= operatingUpperBound) & (observedThrust = V2)", "Verbatim: the `& (pilotInput => setThrust = V2)` conjunct lies outside the parenthesized `if` condition and is read as part of it."),
    ("4.1", "4", "when (diff(r(i),y(i)) > E) if((sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null)& (!pilotInput => setThrust = V1) & (observedThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (shaftSpeed >= operatingLowerBound) & (shaftSpeed <= operatingUpperBound) & (observedThrust = V1)", ""),
    ("5.1", "5", "when (diff(r(i),y(i)) > E) if((systemParameter(P) > nominalValue + R) | (systemParameter(P) < nominalValue - R) | (systemParameter(P) = null)& (observedThrust = V1)& (pilotInput => setThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (settlingTime >= 0) & (settlingTime <= settlingTimeMax) & (observedThrust = V2)", ""),
    ("5.2", "5", "when (diff(r(i),y(i)) > E) if((systemParameter(P) > nominalValue + R) | (systemParameter(P) < nominalValue - R) | (systemParameter(P) = null)& (observedThrust = V1)& (pilotInput => setThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (overshoot >= 0) & (overshoot <= overshootMax) & (observedThrust = V2)", ""),
    ("5.3", "5", "when (diff(r(i),y(i)) > E) if((systemParameter(P) > nominalValue + R) | (systemParameter(P) < nominalValue - R) | (systemParameter(P) = null)& (observedThrust = V1)& (pilotInput => setThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (steadyStateError >= 0) & (steadyStateError <= steadyStateErrorMax) & (observedThrust = V2)", ""),
    ("6.1", "6", "when (diff(r(i),y(i)) > E) if((systemParameter(P) > nominalValue + R) | (systemParameter(P) < nominalValue - R) | (systemParameter(P) = null)& (observedThrust = V2)& (!pilotInput => setThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (settlingTime >= 0) & (settlingTime <= settlingTimeMax) & (observedThrust = V1)", ""),
    ("6.2", "6", "when (diff(r(i),y(i)) > E) if((systemParameter(P) > nominalValue + R) | (systemParameter(P) < nominalValue - R) | (systemParameter(P) = null)& (observedThrust = V2)& (!pilotInput => setThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (overshoot >= 0) & (overshoot <= overshootMax) & (observedThrust = V1)", ""),
    ("6.3", "6", "when (diff(r(i),y(i)) > E) if((systemParameter(P) > nominalValue + R) | (systemParameter(P) < nominalValue - R) | (systemParameter(P) = null)& (observedThrust = V2)& (!pilotInput => setThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (steadyStateError >= 0) & (steadyStateError <= steadyStateErrorMax) & (observedThrust = V1)", ""),
    ("7.1", "7", "when (diff(r(i),y(i)) > E) if((systemParameter(P) > nominalValue + R) | (systemParameter(P) < nominalValue - R) | (systemParameter(P) = null)& (observedThrust = V1)& (pilotInput => setThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (shaftSpeed >= operatingLowerBound) & (shaftSpeed <= operatingUpperBound) & (observedThrust = V2)", ""),
    ("8.1", "8", "when (diff(r(i),y(i)) > E) if((systemParameter(P) > nominalValue + R) | (systemParameter(P) < nominalValue - R) | (systemParameter(P) = null)& (!pilotInput => setThrust = V1)& (observedThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (shaftSpeed >= operatingLowerBound) & (shaftSpeed <= operatingUpperBound) & (observedThrust = V1)", ""),
    ("9.1", "9", "when (diff(r(i),y(i)) > E) if ((outsideAirPressure(T1) != outsideAirPressure(T2)) & (diff(t2,t1) < threshold) & (abs(outsideAirPressure (T1) - outsideAirPressure(T2)) > pressureThreshold) & (observedThrust = V1)& (pilotInput => setThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (settlingTime >= 0) & (settlingTime <= settlingTimeMax) & (observedThrust = V2)", "Normalized: the printed condition has an unbalanced parenthesis; `)` is inserted after the first `outsideAirPressure(T2)`."),
    ("9.2", "9", "when (diff(r(i),y(i)) > E) if ((outsideAirPressure(T1) != outsideAirPressure(T2)) & (diff(t2,t1) < threshold) & (abs(outsideAirPressure (T1) - outsideAirPressure(T2)) > pressureThreshold) & (observedThrust = V1)& (pilotInput => setThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (overshoot >= 0) & (overshoot <= overshootMax) & (observedThrust = V2)", "Normalized: the printed condition has an unbalanced parenthesis; `)` is inserted after the first `outsideAirPressure(T2)`."),
    ("9.3", "9", "when (diff(r(i),y(i)) > E) if ((outsideAirPressure(T1) != outsideAirPressure(T2)) & (diff(t2,t1) < threshold) & (abs(outsideAirPressure (T1) - outsideAirPressure(T2)) > pressureThreshold) & (observedThrust = V1)& (pilotInput => setThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (steadyStateError >= 0) & (steadyStateError <= steadyStateErrorMax) & (observedThrust = V2)", "Normalized: the printed condition has an unbalanced parenthesis; `)` is inserted after the first `outsideAirPressure(T2)`."),
    ("10.1", "10", "when (diff(r(i),y(i)) > E) if ((outsideAirPressure(T1) != outsideAirPressure(T2)) & (diff(t2,t1) < threshold) & (abs(outsideAirPressure (T1) - outsideAirPressure(T2)) > pressureThreshold) & (observedThrust = V2)& (!pilotInput => setThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (settlingTime >= 0) & (settlingTime <= settlingTimeMax) & (observedThrust = V1)", "Normalized: the printed condition has an unbalanced parenthesis; `)` is inserted after the first `outsideAirPressure(T2)`."),
    ("10.2", "10", "when (diff(r(i),y(i)) > E) if ((outsideAirPressure(T1) != outsideAirPressure(T2)) & (diff(t2,t1) < threshold) & (abs(outsideAirPressure (T1) - outsideAirPressure(T2)) > pressureThreshold) & (observedThrust = V2)& (!pilotInput => setThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (overshoot >= 0) & (overshoot <= overshootMax) & (observedThrust = V1)", "Normalized: the printed condition has an unbalanced parenthesis; `)` is inserted after the first `outsideAirPressure(T2)`."),
    ("10.3", "10", "when (diff(r(i),y(i)) > E) if ((outsideAirPressure(T1) != outsideAirPressure(T2)) & (diff(t2,t1) < threshold) & (abs(outsideAirPressure (T1) - outsideAirPressure(T2)) > pressureThreshold) & (observedThrust = V2)& (!pilotInput => setThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (steadyStateError >= 0) & (steadyStateError <= steadyStateErrorMax) & (observedThrust = V1)", "Normalized: the printed condition has an unbalanced parenthesis; `)` is inserted after the first `outsideAirPressure(T2)`."),
    ("11.1", "11", "when (diff(r(i),y(i)) > E) if ((outsideAirPressure(T1) != outsideAirPressure(T2)) & (diff(t2,t1) < threshold) & (abs(outsideAirPressure (T1) - outsideAirPressure(T2)) > pressureThreshold) & (observedThrust = V1)& (pilotInput => setThrust = V2)) Controller shall until (diff(r(i),y(i)) < e) (shaftSpeed >= operatingLowerBound) & (shaftSpeed <= operatingUpperBound) & (observedThrust = V2)", "Normalized: the printed condition has an unbalanced parenthesis; `)` is inserted after the first `outsideAirPressure(T2)`."),
    ("12.1", "12", "when (diff(r(i),y(i)) > E) if ((outsideAirPressure(T1) != outsideAirPressure(T2)) & (diff(t2,t1) < threshold) & (abs(outsideAirPressure (T1) - outsideAirPressure(T2)) > pressureThreshold) & (observedThrust = V2)& (!pilotInput => setThrust = V1)) Controller shall until (diff(r(i),y(i)) < e) (shaftSpeed >= operatingLowerBound) & (shaftSpeed <= operatingUpperBound) & (observedThrust = V1)", "Normalized: the printed condition has an unbalanced parenthesis; `)` is inserted after the first `outsideAirPressure(T2)`."),
    ("13.1", "13", "nominal when (diff(setNL, observedNL) > NLmax) if (pilotInput => surgeStallAvoidance) Controller shall until (diff(setNL, observedNL) < NLmin) (changeMode(surgeStallPrevention))", ""),
    ("13.2", "13", "surgeStallPrevention when (diff(setNL, observedNL) < NLmax) if (pilotInput => !surgeStallAvoidance) Controller shall until (diff(setNL, observedNL) > NLmin) (changeMode(nominal))", ""),
    ("14.1", "14", "nominal when (diff(setNL, observedNL) > NLmax) if (!pilotInput => surgeStallAvoidance) Controller shall until (diff(setNL, observedNL) < NLmin) (changeMode(surgeStallPrevention))", ""),
    ("14.2", "14", "surgeStallPrevention when (diff(setNL, observedNL) < NLmax) if (!pilotInput => !surgeStallAvoidance) Controller shall until (diff(setNL, observedNL) > NLmin) (changeMode(nominal))", ""),
];

/// (index, requirement index, preconditions, input steps, expected results)
const SCENARIOS: [(&str, &str, &str, &str, &str); 20] = [
    ("1", "1", "Aircraft is in operating mode M and sensor S value deviates at most +/- R % from nominal value", "Observed aircraft thrust is at value V1 and pilot input changes from A1 to A2", "Observed aircraft thrust changes and settles to value V2, respecting control objectives (settling time, overshoot, steady state error)"),
    ("2", "1", "Aircraft is in operating mode M and sensor S value is not available (sensor is out of order)", "Observed aircraft thrust is at value V1 and pilot input changes from A1 to A2", "Observed aircraft thrust changes and settles to value V2, respecting control objectives (settling time, overshoot, steady state error)"),
    ("3", "2", "Aircraft is in operating mode M and sensor S value deviates at most +/- R % from nominal value", "Observed aircraft thrust is at value V1 and perturbations in non-pilot input cause it to change to V2", "Observed aircraft thrust returns to value V1, respecting control objectives (settling time, overshoot, steady state error)"),
    ("4", "2", "Aircraft is in operating mode M and sensor S value is not available (sensor is out of order)", "Observed aircraft thrust is at value V1 and perturbations in non-pilot input cause it to change to V2", "Observed aircraft thrust returns to value V1, respecting control objectives (settling time, overshoot, steady state error)"),
    ("5", "3", "Aircraft is in operating mode M and sensor S value deviates at most +/- R % from nominal value", "Observed aircraft thrust is at value V1 and pilot input changes from A1 to A2", "Observed aircraft thrust changes and settles to value V2, respecting operating limit objectives (e.g. upper limit in shaft speed)"),
    ("6", "3", "Aircraft is in operating mode M and sensor S value is not available (sensor is out of order)", "Observed aircraft thrust is at value V1 and pilot input changes from A1 to A2", "Observed aircraft thrust changes and settles to value V2, respecting operating limit objectives (e.g. upper limit in shaft speed)"),
    ("7", "4", "Aircraft is in operating mode M and sensor S value deviates at most +/- R % from nominal value", "Observed aircraft thrust is at value V1 and perturbations in non-pilot input cause it to change to V2", "Observed aircraft thrust returns to value V1, respecting operating limit objectives (e.g. upper limit in shaft speed)"),
    ("8", "4", "Aircraft is in operating mode M and sensor S value is not available (sensor is out of order)", "Observed aircraft thrust is at value V1 and perturbations in non-pilot input cause it to change to V2", "Observed aircraft thrust returns to value V1, respecting operating limit objectives (e.g. upper limit in shaft speed)"),
    ("9", "5", "Aircraft is in operating mode M and system parameter P deviates at most +/- R % from nominal value", "Observed aircraft thrust is at value V1 and pilot input changes from A1 to A2", "Observed aircraft thrust changes and settles to value V2, respecting control objectives (settling time, overshoot, steady state error)"),
    ("10", "6", "Aircraft is in operating mode M and system parameter P deviates at most +/- R % from nominal value", "Observed aircraft thrust is at value V1 and perturbations in non-pilot input cause it to change to V2", "Observed aircraft thrust returns to value V1, respecting control objectives (settling time, overshoot, steady state error)"),
    ("11", "7", "Aircraft is in operating mode M and system parameter P deviates at most +/- R % from nominal value", "Observed aircraft thrust is at value V1 and pilot input changes from A1 to A2", "Observed aircraft thrust changes and settles to value V2, respecting operating limit objectives (e.g. upper limit in shaft speed)"),
    ("12", "8", "Aircraft is in operating mode M and system parameter P deviates at most +/- R % from nominal value", "Observed aircraft thrust is at value V1 and perturbations in non-pilot input cause it to change to V2", "Observed aircraft thrust returns to value V1, respecting operating limit objectives (e.g. upper limit in shaft speed)"),
    ("13", "9", "Aircraft is in operating mode M", "Observed aircraft thrust is at value V1, pilot input changes from A1 to A2, and outside air pressure abruptly changes from P1 to P2", "Observed aircraft thrust changes and settles to value V2, respecting control objectives (settling time, overshoot, steady state error)"),
    ("14", "10", "Aircraft is in operating mode M", "Observed aircraft thrust is at value V1, small perturbations in non-pilot input cause it to change to V2, and outside air pressure abruptly changes from P1 to P2", "Observed aircraft thrust returns to value V1, respecting control objectives (settling time, overshoot, steady state error)"),
    ("15", "11", "Aircraft is in operating mode M", "Observed aircraft thrust is at value V1, pilot input changes from A1 to A2, and outside air pressure abruptly changes from P1 to P2", "Observed aircraft thrust changes and settles to value V2, respecting operating limit objectives (e.g. upper limit in shaft speed)"),
    ("16", "12", "Aircraft is in operating mode M", "Observed aircraft thrust is at value V1, small perturbations in non-pilot input cause it to change to V2, and outside air pressure abruptly changes from P1 to P2", "Observed aircraft thrust returns to value V1, respecting operating limit objectives (e.g. upper limit in shaft speed)"),
    ("17", "13", "Aircraft is in nominal operating mode", "Pilot input changes from A1 to A2, causing surge / stall avoidance indicator signal to be set", "Aircraft switches to surge / stall prevention operating mode"),
    ("18", "13", "Aircraft is in surge / stall prevention operating mode", "Pilot input changes from A1 to A2, causing surge / stall avoidance indicator signal to be cleared", "Aircraft switches to nominal operating mode"),
    ("19", "14", "Aircraft is in nominal operating mode", "Perturbations in non-pilot input cause surge / stall avoidance indicator signal to be set", "Aircraft switches to surge / stall prevention operating mode"),
    ("20", "14", "Aircraft is in surge / stall prevention operating mode", "Perturbations in non-pilot input cause surge / stall avoidance indicator signal to be cleared", "Aircraft switches to nominal operating mode"),
];

/// `sensorfaults` as a predicate over the sensor observation.
pub const SENSORFAULTS_DEFINITION: &str =
    "(sensorValue(S) > nominalValue + R) | (sensorValue(S) < nominalValue - R) | (sensorValue(S) = null)";

/// Conjunction of the three child response envelopes of `UC5_R_1`.
pub const CONTROL_OBJECTIVES_DEFINITION: &str = "(settlingTime >= 0) & (settlingTime <= settlingTimeMax) & (overshoot >= 0) & (overshoot <= overshootMax) & (steadyStateError >= 0) & (steadyStateError <= steadyStateErrorMax) & (observedThrust = V2)";

fn id(s: &str) -> RequirementId {
    RequirementId::new(s).expect("corpus ids are well formed")
}

fn num(s: &str) -> Value {
    Value::Num(
        s.parse::<Decimal>()
            .expect("corpus numbers are well formed"),
    )
}

fn nums(values: &[&str]) -> Vec<Value> {
    values.iter().map(|v| num(v)).collect()
}

fn real(name: &str, kind: VarKind, domain: Vec<Value>, description: &str) -> VariableDecl {
    VariableDecl::new(name, kind, ValueType::Real)
        .with_domain(domain)
        .with_description(description)
}

fn constant(name: &str, value: &str, description: &str) -> VariableDecl {
    real(name, VarKind::Constant, vec![num(value)], description)
}

fn boolean(name: &str, kind: VarKind, description: &str) -> VariableDecl {
    VariableDecl::boolean(name, kind).with_description(description)
}

fn label(name: &str, description: &str) -> VariableDecl {
    VariableDecl::new(
        name,
        VarKind::Constant,
        ValueType::Enum(vec![name.to_owned()]),
    )
    .with_description(description)
}

/// Every symbol of the corpus. Reals carry three-point domains for bounded
/// checking; thresholds are pinned to one representative value.
pub fn corpus_glossary() -> Vec<VariableDecl> {
    let signal = || nums(&["0", "1", "2"]);
    let metric = || nums(&["-1", "1", "3"]);
    vec![
        boolean(
            "sensorfaults",
            VarKind::Internal,
            "abstract: some sensor deviates or is unavailable",
        ),
        boolean(
            "trackingPilotCommands",
            VarKind::Internal,
            "abstract: the controller follows pilot input",
        ),
        boolean(
            "controlObjectives",
            VarKind::Internal,
            "abstract: settling time, overshoot and steady state error within limits",
        ),
        boolean(
            "operatingLimitObjectives",
            VarKind::Internal,
            "abstract: operating limits such as shaft speed respected",
        ),
        boolean(
            "mechanicalFatigue",
            VarKind::Internal,
            "abstract: system parameters perturbed by fatigue",
        ),
        boolean(
            "lowProbabilityHazardousEvents",
            VarKind::Internal,
            "abstract: rare hazards such as abrupt air pressure change",
        ),
        boolean("pilotInput", VarKind::Input, "pilot input is changing"),
        boolean(
            "surgeStallAvoidance",
            VarKind::Input,
            "surge / stall avoidance indicator signal",
        ),
        boolean("nominal", VarKind::Mode, "nominal operating mode"),
        boolean(
            "surgeStallPrevention",
            VarKind::Mode,
            "surge / stall prevention operating mode",
        ),
        VariableDecl::boolean("changeMode", VarKind::Function)
            .with_arity(1)
            .with_description("the controller commands a switch to the given mode"),
        real(
            "sensorValue",
            VarKind::Function,
            nums(&["1", "2"]).into_iter().chain([Value::Null]).collect(),
            "value reported by sensor; null when unavailable",
        )
        .with_arity(1),
        real(
            "systemParameter",
            VarKind::Function,
            nums(&["1", "2"]).into_iter().chain([Value::Null]).collect(),
            "value of a system parameter; null when unavailable",
        )
        .with_arity(1),
        real(
            "r",
            VarKind::Function,
            signal(),
            "reference value at a time point",
        )
        .with_arity(1),
        real(
            "y",
            VarKind::Function,
            signal(),
            "observed value at a time point",
        )
        .with_arity(1),
        real(
            "outsideAirPressure",
            VarKind::Function,
            signal(),
            "outside air pressure at a time point",
        )
        .with_arity(1),
        constant("nominalValue", "1", "nominal sensor or parameter value"),
        constant("R", "0.5", "permitted deviation from the nominal value"),
        constant("E", "1", "tracking error that triggers the obligation"),
        constant("e", "1", "tracking error that ends the obligation"),
        constant("V1", "0", "initial thrust value"),
        constant("V2", "2", "target thrust value"),
        real("setThrust", VarKind::Input, signal(), "commanded thrust"),
        real(
            "observedThrust",
            VarKind::Input,
            signal(),
            "measured thrust",
        ),
        real(
            "settlingTime",
            VarKind::Output,
            metric(),
            "settling time of the thrust response",
        ),
        real(
            "overshoot",
            VarKind::Output,
            metric(),
            "overshoot of the thrust response",
        ),
        real(
            "steadyStateError",
            VarKind::Output,
            metric(),
            "steady state error of the thrust response",
        ),
        constant("settlingTimeMax", "2", "settling time limit"),
        constant("overshootMax", "2", "overshoot limit"),
        constant("steadyStateErrorMax", "2", "steady state error limit"),
        real(
            "shaftSpeed",
            VarKind::Input,
            nums(&["0", "2", "4"]),
            "shaft speed",
        ),
        constant("operatingLowerBound", "1", "lower shaft speed limit"),
        constant("operatingUpperBound", "3", "upper shaft speed limit"),
        real(
            "t1",
            VarKind::Input,
            signal(),
            "time of the first pressure sample",
        ),
        real(
            "t2",
            VarKind::Input,
            signal(),
            "time of the second pressure sample",
        ),
        constant("threshold", "1", "window for an abrupt pressure change"),
        constant(
            "pressureThreshold",
            "1",
            "pressure change considered abrupt",
        ),
        real(
            "setNL",
            VarKind::Input,
            signal(),
            "set low-pressure spool speed",
        ),
        real(
            "observedNL",
            VarKind::Input,
            signal(),
            "observed low-pressure spool speed",
        ),
        constant(
            "NLmax",
            "1",
            "spool speed error entering surge / stall prevention",
        ),
        constant(
            "NLmin",
            "1",
            "spool speed error leaving surge / stall prevention",
        ),
        label("i", "time point label"),
        label("S", "sensor label"),
        label("P", "system parameter label"),
        label("T1", "first pressure sample label"),
        label("T2", "second pressure sample label"),
    ]
}

/// Mappings for `UC5_R_1` and `UC5_R_13`. The `controlObjectives`
/// definition is editor-supplied.
pub fn corpus_mappings() -> Vec<AbstractionMapping> {
    let def = |name: &str, concrete: &str| Definition {
        abstract_name: name.to_owned(),
        concrete: parse_expr(concrete).expect("corpus definitions parse"),
    };
    vec![
        AbstractionMapping {
            parent_id: id("UC5_R_1"),
            child_ids: vec![id("UC5_R_1.1"), id("UC5_R_1.2"), id("UC5_R_1.3")],
            definitions: vec![
                def("sensorfaults", SENSORFAULTS_DEFINITION),
                def("trackingPilotCommands", "pilotInput"),
                def("controlObjectives", CONTROL_OBJECTIVES_DEFINITION),
            ],
            superposition_note: "Data refinement for sensorfaults and trackingPilotCommands. The when/until clauses, the setThrust and observedThrust conditions and the observedThrust update are superposition. The controlObjectives definition is editor-supplied.".to_owned(),
        },
        AbstractionMapping {
            parent_id: id("UC5_R_13"),
            child_ids: vec![id("UC5_R_13.1"), id("UC5_R_13.2")],
            definitions: vec![def("trackingPilotCommands", "pilotInput")],
            superposition_note: "The mode scopes, spool speed triggers and surgeStallAvoidance conditions are superposition.".to_owned(),
        },
    ]
}

fn record(
    id_text: String,
    parents: Vec<RequirementId>,
    text: &str,
    rationale: &str,
    comments: &str,
) -> RequirementRecord {
    let mut r = RequirementRecord::parsed(&id_text, &[], text).expect("corpus requirements parse");
    r.parent_ids = parents;
    r.rationale = rationale.to_owned();
    r.comments = comments.to_owned();
    r
}

/// The complete built-in project.
pub fn builtin_corpus() -> Project {
    let mut project = Project::new("aircraft-engine-controller");
    for (n, text, source) in PARENTS {
        project.requirements.push(record(
            format!("{USE_CASE}_R_{n}"),
            Vec::new(),
            text,
            source,
            "",
        ));
    }
    for (n, parent, text, comments) in CHILDREN {
        let parent = id(&format!("{USE_CASE}_R_{parent}"));
        project.requirements.push(record(
            format!("{USE_CASE}_R_{n}"),
            vec![parent],
            text,
            "",
            comments,
        ));
    }
    project.glossary = corpus_glossary().into_iter().collect();
    project.mappings = corpus_mappings();
    project.scenarios = SCENARIOS
        .iter()
        .map(|(n, req, pre, steps, expected)| ScenarioRecord {
            id: format!("{USE_CASE}_TC_{n}"),
            requirement_id: id(&format!("{USE_CASE}_R_{req}")),
            preconditions: (*pre).to_owned(),
            input_steps: (*steps).to_owned(),
            expected_results: (*expected).to_owned(),
        })
        .collect();
    project
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lint::{lint_project, Severity};
    use crate::model::validate_project;
    use crate::semantics::{classify_template, TemplateKey};

    #[test]
    fn counts_and_links() {
        let p = builtin_corpus();
        assert_eq!(p.requirements.len(), 42);
        assert_eq!(
            p.requirements
                .iter()
                .filter(|r| r.parent_ids.is_empty())
                .count(),
            14
        );
        assert_eq!(
            p.requirement("UC5_R_1.2").unwrap().parent_ids,
            vec![id("UC5_R_1")]
        );
        assert_eq!(p.scenarios.len(), 20);
        assert!(validate_project(&p).is_empty());
    }

    #[test]
    fn scenario_text() {
        let p = builtin_corpus();
        let tc17 = p.scenarios.iter().find(|s| s.id == "UC5_TC_17").unwrap();
        assert!(tc17
            .expected_results
            .contains("surge / stall prevention operating mode"));
        assert_eq!(tc17.requirement_id.as_str(), "UC5_R_13");
        for s in &p.scenarios {
            assert!(p.requirement(s.requirement_id.as_str()).is_some());
        }
    }

    #[test]
    fn template_census() {
        let p = builtin_corpus();
        let mut counts = alloc::collections::BTreeMap::new();
        for r in &p.requirements {
            *counts
                .entry(classify_template(&r.ast().unwrap()).unwrap())
                .or_insert(0) += 1;
        }
        assert_eq!(counts[&TemplateKey::NULL_REGULAR_EVENTUALLY], 14);
        assert_eq!(counts[&TemplateKey::NULL_REGULAR_UNTIL], 24);
        assert_eq!(counts[&TemplateKey::IN_REGULAR_UNTIL], 4);
    }

    #[test]
    fn glossary_is_consistent_and_lint_clean() {
        let p = builtin_corpus();
        for d in p.glossary.iter() {
            assert!(d.check().is_empty(), "{}: {:?}", d.name, d.check());
        }
        let errors: Vec<_> = lint_project(&p)
            .into_iter()
            .filter(|f| f.severity == Severity::Error)
            .collect();
        assert!(errors.is_empty(), "{errors:?}");
    }

    #[test]
    fn normalizations_are_recorded() {
        let p = builtin_corpus();
        let r = p.requirement("UC5_R_2.3").unwrap();
        assert!(r.fretish_text.contains("steadyStateErrorMax"));
        assert!(r.comments.contains("steadyStateError Max"));
        assert!(!p.requirement("UC5_R_9.1").unwrap().comments.is_empty());
    }
}
