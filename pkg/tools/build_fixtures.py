#!/usr/bin/env python3
"""Regenerate the bundled datasets in src/kbir/data/.

The files are plain native-format knowledge bases; this script is the single
source of truth for their content.  Run it from the repository root after
changing anything below.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from kbir import (  # noqa: E402
    DocumentRecord,
    Entity,
    Facet,
    KbInputs,
    RelationCategory,
    RelationInstance,
    RelationType,
    build_postings,
    save_native,
)

DATA_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "kbir" / "data"

GENERIC = RelationType(
    name="HierarchicalRelation",
    category=RelationCategory.GENERIC_HIERARCHY,
    source_role="broaderTermMember",
    target_role="narrowerTermMember",
)


def _entities(facet: str, *specs) -> list:
    out = []
    for spec in specs:
        if isinstance(spec, str):
            out.append(Entity(id=spec, preferred_label=spec.replace("_", " "), facet=facet))
        else:
            entity_id, label, synonyms = spec
            out.append(
                Entity(
                    id=entity_id,
                    preferred_label=label or entity_id.replace("_", " "),
                    facet=facet,
                    synonyms=tuple(synonyms),
                )
            )
    return out


def _edges(type_name: str, pairs) -> list:
    return [RelationInstance(type_name, s, t) for s, t in pairs]


# --------------------------------------------------------------------------
# asist: thesaurus excerpt with typed relations and a document corpus
# --------------------------------------------------------------------------

ASIST_ENTITIES = _entities(
    "asist",
    # vocabulary branch
    ("controlled_vocabularies", None, ["controlled vocabulary"]),
    "authority_files",
    "index_languages",
    "classification_schemes",
    ("subject_headings", None, ["subject heading"]),
    ("thesauri", None, ["thesaurus"]),
    "subject_heading_lists",
    # processing branch
    "information_processing",
    "indexing",
    "classification",
    ("automatic_indexing", None, ["machine indexing"]),
    "content_based_indexing",
    "machine_aided_indexing",
    "automatic_classification",
    # related-term neighborhood, path length 1
    "computational_linguistics",
    ("natural_language_processing", None, ["NLP"]),
    # path length 2
    "automatic_categorization",
    "cluster_analysis",
    "computational_lexicography",
    "full_text_searching",
    "image_indexing",
    "information_science",
    "knowledge_representation",
    "natural_language_interfaces",
    "probabilistic_indexing",
    "relevance_ranking",
    "text_processing",
    # path length 3
    "categories",
    "co_occurrence_analysis",
    "cognitive_science",
    "computer_science",
    "cybernetics",
    "data_presentation",
    "domain_analysis",
    "image_analysis",
    "image_databases",
    "image_retrieval",
    "images",
    ("information_retrieval", None, ["IR"]),
    "information_science_education",
    "information_scientists",
    "information_technology",
    "librarianship",
    "linguistics",
    "ontologies",
    # typed-relation endpoints around "indexing"
    "facet_analysis",
    "literary_warrant",
    "weighting",
    "abstracting_and_indexing_service_bureaus",
    "indexer_consistency",
    "indexing_exhaustivity",
    "indexing_specificity",
    "information_retrieval_indexes",
    "index_terms",
    "vocabulary_control",
    "index_language_construction",
)

ASIST_TYPES = [
    GENERIC,
    RelationType("RelatedTerm", RelationCategory.UNSPECIFIC_ASSOCIATION, "relatedFrom", "relatedTo"),
    RelationType("Methodology", RelationCategory.FIELD_OF_APPLICATION, "isAdopting", "isMethodOf"),
    RelationType("Usage", RelationCategory.FIELD_OF_APPLICATION, "isUsing", "isInstrumentOf"),
    RelationType("Production", RelationCategory.ACTION_PRODUCT, "isProducing", "isProductOf"),
    RelationType("Characterization", RelationCategory.UNSPECIFIC_ASSOCIATION, "isCharacterizing", "isCharacterizedBy"),
]

ASIST_HIERARCHY = _edges(
    "HierarchicalRelation",
    [
        ("controlled_vocabularies", "authority_files"),
        ("controlled_vocabularies", "index_languages"),
        ("index_languages", "classification_schemes"),
        ("index_languages", "subject_headings"),
        ("index_languages", "thesauri"),
        ("subject_headings", "subject_heading_lists"),
        ("information_processing", "indexing"),
        ("information_processing", "classification"),
        ("indexing", "automatic_indexing"),
        ("indexing", "content_based_indexing"),
        ("indexing", "machine_aided_indexing"),
        ("classification", "automatic_classification"),
    ],
)

# Undirected neighborhood around automatic_indexing: six terms at distance 1,
# eleven at distance 2, nineteen at distance 3.
ASIST_RELATED = _edges(
    "RelatedTerm",
    [
        ("automatic_indexing", "automatic_classification"),
        ("automatic_indexing", "computational_linguistics"),
        ("automatic_indexing", "content_based_indexing"),
        ("automatic_indexing", "information_processing"),
        ("automatic_indexing", "machine_aided_indexing"),
        ("automatic_indexing", "natural_language_processing"),
        ("automatic_classification", "automatic_categorization"),
        ("automatic_classification", "cluster_analysis"),
        ("computational_linguistics", "computational_lexicography"),
        ("content_based_indexing", "full_text_searching"),
        ("content_based_indexing", "image_indexing"),
        ("information_processing", "information_science"),
        ("information_processing", "knowledge_representation"),
        ("natural_language_processing", "natural_language_interfaces"),
        ("machine_aided_indexing", "probabilistic_indexing"),
        ("machine_aided_indexing", "relevance_ranking"),
        ("natural_language_processing", "text_processing"),
        ("automatic_categorization", "categories"),
        ("cluster_analysis", "classification"),
        ("cluster_analysis", "co_occurrence_analysis"),
        ("information_science", "cognitive_science"),
        ("information_science", "computer_science"),
        ("information_science", "cybernetics"),
        ("knowledge_representation", "data_presentation"),
        ("knowledge_representation", "domain_analysis"),
        ("image_indexing", "image_analysis"),
        ("image_indexing", "image_databases"),
        ("image_indexing", "image_retrieval"),
        ("image_indexing", "images"),
        ("probabilistic_indexing", "information_retrieval"),
        ("information_science", "information_science_education"),
        ("information_science", "information_scientists"),
        ("information_science", "information_technology"),
        ("information_science", "librarianship"),
        ("computational_lexicography", "linguistics"),
        ("knowledge_representation", "ontologies"),
    ],
)

ASIST_TYPED = (
    _edges(
        "Methodology",
        [
            # indexing adopts four methodic procedures; one bureau adopts indexing
            ("indexing", "facet_analysis"),
            ("indexing", "index_languages"),
            ("indexing", "literary_warrant"),
            ("indexing", "weighting"),
            ("abstracting_and_indexing_service_bureaus", "indexing"),
        ],
    )
    + _edges(
        "Usage",
        [
            ("indexing", "authority_files"),
            ("indexing", "classification"),
            ("indexing", "classification_schemes"),
            ("indexing", "index_terms"),
        ],
    )
    + _edges(
        "Production",
        [
            ("vocabulary_control", "controlled_vocabularies"),
            ("index_language_construction", "index_languages"),
            ("automatic_indexing", "subject_headings"),
            ("subject_headings", "thesauri"),
            ("subject_heading_lists", "authority_files"),
            ("indexing", "information_retrieval_indexes"),
        ],
    )
    + _edges(
        "Characterization",
        [
            ("indexing", "indexer_consistency"),
            ("indexing", "indexing_exhaustivity"),
            ("indexing", "indexing_specificity"),
        ],
    )
)


def _doc(doc_id, title, year, creators, subjects):
    return DocumentRecord(
        doc_id=doc_id, title=title, year=year, creators=tuple(creators), subjects=tuple(subjects)
    )


ASIST_DOCS = [
    # facet analysis (9)
    _doc("devadason_1986", "Ranganathan's idea of facet analysis in action", 1986,
         ["Devadason, F.J."], ["facet_analysis"]),
    _doc("coetzee_1968", "Theory of logistic facet analysis", 1968,
         ["Coetzee, P.C."], ["facet_analysis"]),
    _doc("broughton_2001", "Faceted classification as a basis for knowledge organization in a digital environment", 2001,
         ["Broughton, V."], ["facet_analysis"]),
    _doc("bonnici_2007", "Development of a facet analysis system to identify and measure the dimensions of interaction in online learning", 2007,
         ["Bonnici, L.J.", "Kim, J.", "Burnett, K.", "Miksa, S.D."], ["facet_analysis"]),
    _doc("beghtol_2006", "The facet concept as a universal principle of subdivision", 2006,
         ["Beghtol, C."], ["facet_analysis"]),
    _doc("labarre_catalogs", "Facets, search and discovery in next generation catalogs", None,
         ["LaBarre, K."], ["facet_analysis"]),
    _doc("facets_2008", "Facets: a fruitful notion in many domains", 2008,
         [], ["facet_analysis"]),
    _doc("kumar_2010", "Method for developing a domain ontology: a case study for a multidisciplinary subject", 2010,
         ["Kumar, V.", "Neelameghan, A.", "Deokattey, S."], ["facet_analysis"]),
    _doc("labarre_2010", "Facet analysis", 2010, ["LaBarre, K."], ["facet_analysis"]),
    # weighting (3)
    _doc("small_zitt_2008", "Modifying the journal impact factor by fractional citation weighting", 2008,
         ["Small, H.", "Zitt, M."], ["weighting"]),
    _doc("kim_2007", "Automatic user preference learning for personalized electronic program guide applications", 2007,
         ["Kim, M.", "Kang, S.", "Lim, J."], ["weighting"]),
    _doc("skare_2009", "Complementarity: a concept for document analysis?", 2009,
         ["Skare, R."], ["weighting"]),
    # subject headings (8)
    _doc("dykstra_saved_1988", "Can subject headings be saved?", 1988, ["Dykstra, M."], ["subject_headings"]),
    _doc("dykstra_thesaurus_1988", "LC subject headings disguised as a thesaurus", 1988,
         ["Dykstra, M."], ["subject_headings", "thesauri"]),
    _doc("chan_1973", "The direct and inverted forms of subject headings containing national adjectives", 1973,
         ["Chan, L.M."], ["subject_headings"]),
    _doc("elliot_1992", "Library of Congress Subject Headings: is the case to be altered?", 1992,
         ["Elliot, J."], ["subject_headings"]),
    _doc("lc_response_1987", "Library of Congress response to 'Is Euthanasia the Answer?'", 1987,
         [], ["subject_headings"]),
    _doc("dede_frost_1988", "Subject heading compatibility between LCSH and catalog files of a large research library", 1988,
         ["Dede, B.A.", "Frost, C.O."], ["subject_headings"]),
    _doc("chan_1995", "Library of Congress Subject Headings: principles and application", 1995,
         ["Chan, L.M."], ["subject_headings"]),
    _doc("studwell_1990", "Library of Congress Subject Heading period subdivisions for Southeast Asia", 1990,
         ["Studwell, W.E."], ["subject_headings"]),
    # automatic indexing (6)
    _doc("jones_1990", "Natural-language processing and automatic indexing: a reply", 1990,
         ["Jones, K.P."], ["automatic_indexing"]),
    _doc("cooper_1978", "Indexing documents by Gedanken experimentation", 1978,
         ["Cooper, W.S."], ["automatic_indexing"]),
    _doc("salton_1970", "Automatic text analysis", 1970, ["Salton, G."], ["automatic_indexing"]),
    _doc("borko_1964", "Research in automatic generation of classification systems", 1964,
         ["Borko, H."], ["automatic_indexing", "automatic_classification"]),
    _doc("luhn_1957", "A statistical approach to mechanized encoding and searching of literary information", 1957,
         ["Luhn, H.P."], ["automatic_indexing"]),
    _doc("field_1975", "Towards automatic indexing: automatic assignment of controlled-language indexing from free indexing", 1975,
         ["Field, B.J."], ["automatic_indexing"]),
    # subject heading lists (4)
    _doc("sears_2000", "Sears list of subject headings", 2000, ["Miller, J."], ["subject_heading_lists"]),
    _doc("lcsh_2007", "Library of Congress Subject Headings, 30th edition", 2007, [], ["subject_heading_lists"]),
    _doc("satija_2000", "The Sears List: tradition and innovation", 2000, ["Satija, M.P."], ["subject_heading_lists"]),
    _doc("fountain_2001", "Subject headings for school and public libraries", 2001,
         ["Fountain, J.F."], ["subject_heading_lists"]),
    # vocabulary control (3)
    _doc("lancaster_1972", "Vocabulary control for information retrieval", 1972,
         ["Lancaster, F.W."], ["vocabulary_control"]),
    _doc("svenonius_1986", "Unanswered questions in the design of controlled vocabularies", 1986,
         ["Svenonius, E."], ["vocabulary_control"]),
    _doc("leise_2008", "Controlled vocabularies, an introduction", 2008, ["Leise, F."], ["vocabulary_control"]),
    # authority files (3)
    _doc("clack_1988", "Authority control and linked bibliographic databases", 1988,
         ["Clack, D.H."], ["authority_files"]),
    _doc("tillett_1989", "Considerations for authority control in the online environment", 1989,
         ["Tillett, B.B."], ["authority_files"]),
    _doc("auld_1982", "Authority control: an eighty-year review", 1982, ["Auld, L."], ["authority_files"]),
    # thesauri (5 with the Dykstra overlap)
    _doc("gopinath_1987", "Symbiosis between classification and thesaurus", 1987,
         ["Gopinath, M.A."], ["thesauri", "classification"]),
    _doc("aitchison_1987", "Thesaurus construction: a practical manual", 1987,
         ["Aitchison, J.", "Gilchrist, A."], ["thesauri"]),
    _doc("roberts_1984", "The pre-history of the information retrieval thesaurus", 1984,
         ["Roberts, N."], ["thesauri"]),
    _doc("krooks_1993", "The evolution of guidelines for thesaurus construction", 1993,
         ["Krooks, D.A.", "Lancaster, F.W."], ["thesauri"]),
    # classification (4 with the Gopinath overlap)
    _doc("ranganathan_1967", "Prolegomena to library classification", 1967,
         ["Ranganathan, S.R."], ["classification"]),
    _doc("hulme_1911", "Principles of book classification", 1911, ["Hulme, E.W."], ["classification"]),
    _doc("mills_2004", "Faceted classification and logical division in information retrieval", 2004,
         ["Mills, J."], ["classification"]),
    # classification schemes (2)
    _doc("ddc_2003", "Dewey decimal classification and relative index", 2003,
         ["Mitchell, J.S."], ["classification_schemes"]),
    _doc("bc2_1992", "Bliss bibliographic classification, second edition", 1992,
         ["Mills, J.", "Broughton, V."], ["classification_schemes"]),
    # index terms (2)
    _doc("sparck_jones_1973", "Index term weighting", 1973, ["Sparck Jones, K."], ["index_terms"]),
    _doc("zunde_1967", "Indexing consistency and quality", 1967,
         ["Zunde, P.", "Dexter, M.E."], ["index_terms", "indexer_consistency"]),
    # indexing (3)
    _doc("borko_bernier_1978", "Indexing concepts and methods", 1978,
         ["Borko, H.", "Bernier, C.L."], ["indexing"]),
    _doc("lancaster_2003", "Indexing and abstracting in theory and practice", 2003,
         ["Lancaster, F.W."], ["indexing"]),
    _doc("fugmann_1993", "Subject analysis and indexing: theoretical foundation and practical advice", 1993,
         ["Fugmann, R."], ["indexing"]),
    # assorted neighborhood topics
    _doc("van_rijsbergen_1979", "Information retrieval", 1979, ["van Rijsbergen, C.J."], ["information_retrieval"]),
    _doc("salton_mcgill_1983", "Introduction to modern information retrieval", 1983,
         ["Salton, G.", "McGill, M.J."], ["information_retrieval"]),
    _doc("enser_1995", "Pictorial information retrieval", 1995, ["Enser, P.G.B."], ["images", "image_retrieval"]),
    _doc("ingwersen_1996", "Cognitive perspectives of information retrieval interaction", 1996,
         ["Ingwersen, P."], ["cognitive_science", "information_retrieval"]),
    _doc("rasmussen_1997", "Indexing images", 1997, ["Rasmussen, E.M."], ["content_based_indexing", "image_indexing"]),
    _doc("silvester_1997", "Computer supported indexing: a history and evaluation of NASA's MAI system", 1997,
         ["Silvester, J.P."], ["machine_aided_indexing"]),
    _doc("shera_1983", "Librarianship and information science", 1983,
         ["Shera, J."], ["information_processing", "librarianship"]),
    _doc("keenan_1982", "Abstracting and indexing services in perspective", 1982,
         ["Keenan, S."], ["abstracting_and_indexing_service_bureaus"]),
]


# --------------------------------------------------------------------------
# songbirds: taxonomy facet plus behaviour facet, property inheritance demo
# --------------------------------------------------------------------------

SONGBIRD_ENTITIES = _entities(
    "taxonomy",
    "birds",
    "songbirds",
    "penguins",
    "thrushes",
    "warblers",
    "corvids",
    "blackbird",
    ("song_thrush", None, ["Turdus philomelos"]),
    ("blackcap", None, ["Sylvia atricapilla"]),
    "garden_warbler",
    "carrion_crow",
    "magpie",
    "mammals",
    ("wildebeest", None, ["gnu"]),
) + _entities(
    "behaviour",
    "migratory_instinct",
    "song_learning",
    "grain_eating",
)

SONGBIRD_TYPES = [
    GENERIC,
    RelationType("HasBehaviour", RelationCategory.UNSPECIFIC_ASSOCIATION, "isExhibiting", "isExhibitedBy"),
]

SONGBIRD_EDGES = _edges(
    "HierarchicalRelation",
    [
        ("birds", "songbirds"),
        ("birds", "penguins"),
        ("songbirds", "thrushes"),
        ("songbirds", "warblers"),
        ("songbirds", "corvids"),
        ("thrushes", "blackbird"),
        ("thrushes", "song_thrush"),
        ("warblers", "blackcap"),
        ("warblers", "garden_warbler"),
        ("corvids", "carrion_crow"),
        ("corvids", "magpie"),
        ("mammals", "wildebeest"),
    ],
) + _edges(
    "HasBehaviour",
    [
        ("thrushes", "migratory_instinct"),
        ("warblers", "migratory_instinct"),
        ("wildebeest", "migratory_instinct"),
        ("songbirds", "song_learning"),
        ("corvids", "grain_eating"),
    ],
)

SONGBIRD_DOCS = [
    _doc("newton_2008", "The migration ecology of birds", 2008, ["Newton, I."], ["migratory_instinct", "birds"]),
    _doc("catchpole_2008", "Bird song: biological themes and variations", 2008,
         ["Catchpole, C.K.", "Slater, P.J.B."], ["song_learning", "songbirds"]),
    _doc("cramp_1992", "Handbook of the birds of the western Palearctic, volume VI: warblers", 1992,
         ["Cramp, S."], ["warblers"]),
    _doc("estes_1991", "The behavior guide to African mammals", 1991, ["Estes, R.D."], ["wildebeest"]),
]


def build(name, facets, entities, types, instances, docs):
    inputs = KbInputs(
        facets=facets,
        entities=entities,
        relation_types=types,
        relation_instances=instances,
    )
    kb = inputs.build()
    build_postings(kb, docs)  # all subjects must resolve
    text = save_native(kb, docs)
    path = DATA_DIR / f"{name}.json"
    path.write_text(text, encoding="utf-8")
    print(
        f"{path}: {len(kb.entities)} entities, {len(kb.relation_instances)} relations, "
        f"{len(docs)} documents"
    )


def main():
    build(
        "asist",
        [Facet("asist", "ASIST thesaurus excerpt")],
        ASIST_ENTITIES,
        ASIST_TYPES,
        ASIST_HIERARCHY + ASIST_RELATED + ASIST_TYPED,
        ASIST_DOCS,
    )
    build(
        "songbirds",
        [Facet("taxonomy", "taxonomy"), Facet("behaviour", "behaviour")],
        SONGBIRD_ENTITIES,
        SONGBIRD_TYPES,
        SONGBIRD_EDGES,
        SONGBIRD_DOCS,
    )


if __name__ == "__main__":
    main()
