//! IRIs of the vocabularies used across the toolkit.

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const DCTERMS_NS: &str = "http://purl.org/dc/terms/";
pub const VANN_NS: &str = "http://purl.org/vocab/vann/";
pub const VS_NS: &str = "http://www.w3.org/2003/06/sw-vocab-status/ns#";
pub const DCAT_NS: &str = "http://www.w3.org/ns/dcat#";
pub const QB_NS: &str = "http://purl.org/linked-data/cube#";
pub const SEAS_NS: &str = "https://w3id.org/seas/";
pub const CIM_NS: &str = "http://iec.ch/TC57/CIM#";
pub const SAREF_NS: &str = "https://saref.etsi.org/core/";
pub const IDS_NS: &str = "https://w3id.org/idsa/core/";
pub const ARTEMIS_NS: &str = "https://projekat-artemis.rs/";
pub const ARTEMIS_DATA_NS: &str = "https://projekat-artemis.rs/data/";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_PROPERTY: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const RDFS_SUBPROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
pub const RDFS_RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
pub const RDFS_IS_DEFINED_BY: &str = "http://www.w3.org/2000/01/rdf-schema#isDefinedBy";

pub const OWL_ONTOLOGY: &str = "http://www.w3.org/2002/07/owl#Ontology";
pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
pub const OWL_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
pub const OWL_DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
pub const OWL_EQUIVALENT_CLASS: &str = "http://www.w3.org/2002/07/owl#equivalentClass";
pub const OWL_VERSION_IRI: &str = "http://www.w3.org/2002/07/owl#versionIRI";
pub const OWL_VERSION_INFO: &str = "http://www.w3.org/2002/07/owl#versionInfo";
/// Appears in legacy documents where `rdfs:subPropertyOf` is meant; the
/// ontology loader rewrites it with a warning.
pub const OWL_SUB_PROPERTY_OF: &str = "http://www.w3.org/2002/07/owl#subPropertyOf";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const XSD_DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
pub const XSD_DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

pub const DCTERMS_TITLE: &str = "http://purl.org/dc/terms/title";
pub const DCTERMS_ISSUED: &str = "http://purl.org/dc/terms/issued";
pub const DCTERMS_LICENSE: &str = "http://purl.org/dc/terms/license";

pub const VANN_PREFERRED_PREFIX: &str = "http://purl.org/vocab/vann/preferredNamespacePrefix";
pub const VANN_PREFERRED_URI: &str = "http://purl.org/vocab/vann/preferredNamespaceUri";

pub const VS_TERM_STATUS: &str = "http://www.w3.org/2003/06/sw-vocab-status/ns#term_status";

pub const SEAS_ELECTRIC_POWER_SYSTEM: &str = "https://w3id.org/seas/ElectricPowerSystem";
pub const SEAS_FORECAST: &str = "https://w3id.org/seas/Forecast";
pub const SEAS_FEATURE_OF_INTEREST: &str = "https://w3id.org/seas/FeatureOfInterest";
pub const SEAS_ACTIVE_POWER: &str = "https://w3id.org/seas/activePower";
pub const CIM_ACTIVE_POWER: &str = "http://iec.ch/TC57/CIM#ActivePower";
pub const IDS_DIGITAL_CONTENT: &str = "https://w3id.org/idsa/core/DigitalContent";
pub const DCAT_DATASET: &str = "http://www.w3.org/ns/dcat#Dataset";
pub const QB_DATASET: &str = "http://purl.org/linked-data/cube#DataSet";

pub const ARTEMIS_PLANT: &str = "https://projekat-artemis.rs/Plant";
pub const ARTEMIS_ORGANIZATION: &str = "https://projekat-artemis.rs/Organization";
pub const ARTEMIS_ELECTRICAL_GRID: &str = "https://projekat-artemis.rs/ElectricalGrid";
pub const ARTEMIS_DATASET: &str = "https://projekat-artemis.rs/DataSet";
pub const ARTEMIS_LONG_TERM_FORECAST: &str = "https://projekat-artemis.rs/LongTermForecast";
pub const ARTEMIS_SHORT_TERM_FORECAST: &str = "https://projekat-artemis.rs/ShortTermForecast";
pub const ARTEMIS_WEATHER_FORECAST: &str = "https://projekat-artemis.rs/WeatherForecast";
pub const ARTEMIS_PRODUCTION_OBSERVATION: &str = "https://projekat-artemis.rs/ProductionObservation";
pub const ARTEMIS_WEATHER_OBSERVATION: &str = "https://projekat-artemis.rs/WeatherObservation";
pub const ARTEMIS_FORECAST_POINT: &str = "https://projekat-artemis.rs/ForecastPoint";
pub const ARTEMIS_HAS_CAPACITY_ACTIVE_POWER: &str =
    "https://projekat-artemis.rs/hasCapacityActivePower";
pub const ARTEMIS_ABOUT_PLANT: &str = "https://projekat-artemis.rs/aboutPlant";
pub const ARTEMIS_HAS_POINT: &str = "https://projekat-artemis.rs/hasPoint";
pub const ARTEMIS_TIMESTAMP: &str = "https://projekat-artemis.rs/timestamp";
pub const ARTEMIS_ISSUED_AT: &str = "https://projekat-artemis.rs/issuedAt";
pub const ARTEMIS_HAS_ACTIVE_POWER_KW: &str = "https://projekat-artemis.rs/hasActivePowerKw";
pub const ARTEMIS_PREDICTED_POWER_KW: &str = "https://projekat-artemis.rs/predictedPowerKw";
pub const ARTEMIS_STATUS: &str = "https://projekat-artemis.rs/status";
pub const ARTEMIS_CITY: &str = "https://projekat-artemis.rs/city";
pub const ARTEMIS_EIC_FUNCTION_ACRONYM: &str = "https://projekat-artemis.rs/eicFunctionAcronym";
pub const ARTEMIS_WIND_SPEED_MS: &str = "https://projekat-artemis.rs/windSpeedMs";
pub const ARTEMIS_GHI_WM2: &str = "https://projekat-artemis.rs/ghiWm2";
pub const ARTEMIS_TEMPERATURE_C: &str = "https://projekat-artemis.rs/temperatureC";

/// Namespaces whose terms are treated as built-in vocabulary by validation
/// and grounding checks.
pub fn is_builtin_vocabulary(iri: &str) -> bool {
    iri.starts_with(RDF_NS) || iri.starts_with(RDFS_NS) || iri.starts_with(OWL_NS) || iri.starts_with(XSD_NS)
}
