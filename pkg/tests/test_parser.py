import pytest

from millstone.errors import (
    MissingVariable,
    QuerySyntaxError,
    TypeMismatch,
    UnknownField,
    UnknownOperation,
)
from millstone.queryapi.parser import (
    VarRef,
    bind_variables,
    parse_query,
    print_query,
)

DOCUMENT_QUERY = """{
  Document(index: "epo_cos", id: "EP19164094B1") {
    documentParts {
      title
    }
    vector
  }
}"""

DOCUMENTS_QUERY = """
query Documents($index: String!, $keyword: String!) {
  Documents(index: $index, keyword: $keyword) {
    id
    documentParts {
      title
    }
    vector
  }
}
"""


def test_parse_document_query():
    ast = parse_query(DOCUMENT_QUERY)
    assert ast.operation_name == "Document"
    assert ast.operation.args == {"index": "epo_cos", "id": "EP19164094B1"}
    names = [f.name for f in ast.operation.selections]
    assert names == ["documentParts", "vector"]


def test_parse_parameterized_query():
    ast = parse_query(DOCUMENTS_QUERY)
    assert ast.query_name == "Documents"
    assert [(d.name, d.type_name, d.required) for d in ast.var_decls] == [
        ("index", "String", True),
        ("keyword", "String", True),
    ]
    assert ast.operation.args == {"index": VarRef("index"), "keyword": VarRef("keyword")}


def test_pretty_printer_fixpoint():
    for text in (DOCUMENT_QUERY, DOCUMENTS_QUERY):
        printed = print_query(parse_query(text))
        assert print_query(parse_query(printed)) == printed


def test_bind_variables():
    ast = parse_query(DOCUMENTS_QUERY)
    bound, warnings = bind_variables(ast, {"index": "epo_cos", "keyword": "airbag"})
    assert bound.operation.args == {"index": "epo_cos", "keyword": "airbag"}
    assert warnings == []


def test_bind_missing_required_variable():
    ast = parse_query(DOCUMENTS_QUERY)
    with pytest.raises(MissingVariable):
        bind_variables(ast, {"index": "epo_cos"})


def test_bind_type_mismatch():
    ast = parse_query(DOCUMENTS_QUERY)
    with pytest.raises(TypeMismatch):
        bind_variables(ast, {"index": 5, "keyword": "x"})


def test_bind_unused_variable_warns():
    ast = parse_query(DOCUMENT_QUERY)
    _, warnings = bind_variables(ast, {"spare": 1})
    assert warnings == ["unused variable $spare"]


def test_bind_optional_variable_defaults_to_null():
    text = """query Q($k: Int) { searchDocuments(index: "epo_cos", keyword: "airbag", k: $k) { id } }"""
    bound, _ = bind_variables(parse_query(text), {})
    assert bound.operation.args["k"] is None


def test_nested_list_and_object_literals():
    text = """{
      similarityCalculation(
        sources: [{index: "epo_cos", id: "a"}],
        targets: [{index: "epo_cos", id: "b"}],
        metric: "l2"
      ) { values }
    }"""
    ast = parse_query(text)
    assert ast.operation.args["sources"] == [{"index": "epo_cos", "id": "a"}]


def test_comments_and_commas_ignored():
    text = """{
      # fetch one document
      Document(index: "epo_cos", id: "X",) { id, index }
    }"""
    assert parse_query(text).operation_name == "Document"


def test_unknown_field_selection_rejected():
    with pytest.raises(UnknownField):
        parse_query('{ Document(index: "i", id: "x") { wingspan } }')
    with pytest.raises(UnknownField):
        parse_query('{ Document(index: "i", id: "x") { id { sub } } }')
    with pytest.raises(UnknownField):
        parse_query('{ encodeDocument(data: $d) { vector } }')  # scalar leaf
    with pytest.raises(UnknownField):
        parse_query('{ Document(wingspan: 3, id: "x") { id } }')


def test_selection_set_required_for_objects():
    with pytest.raises(QuerySyntaxError):
        parse_query('{ Document(index: "i", id: "x") }')


NEGATIVE_CASES = [
    '{ Document(index: "unterminated',        # unterminated string
    "{ Document(index: ",                     # truncated document
    "{ }",                                    # empty selection set
    '{ Document(index: "i" id: "x") { id } { id } }',  # trailing garbage braces
    "{ Document(index: 1.2.3) { id } }",      # bad number
    '{ Document(index "i") { id } }',         # missing colon
    "{ Document(index: $) { id } }",          # variable without a name
    "{ Document @ id } }",                    # unexpected character
    '{ Document(index: "i") { id } } extra',  # text after the document
    "query ($x: String!) { Document { id } }" ,  # missing query name
]


@pytest.mark.parametrize("text", NEGATIVE_CASES)
def test_negative_cases_report_positions(text):
    with pytest.raises(QuerySyntaxError) as exc_info:
        parse_query(text)
    exc = exc_info.value
    assert exc.code == "SyntaxError"
    assert exc.line >= 0 and exc.col >= 0
    assert "at" in exc.message


def test_unknown_operation_reports_position():
    with pytest.raises(UnknownOperation) as exc_info:
        parse_query("{\n  Documnt(index: \"i\", id: \"x\") { id }\n}")
    assert "at 2:3" in exc_info.value.message
