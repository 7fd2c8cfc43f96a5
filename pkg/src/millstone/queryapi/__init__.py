from .auth import Principal, authenticate, mint_token
from .executor import execute, project
from .parser import QueryAst, bind_variables, parse_query, print_query
from .schema import OPERATIONS, schema_document
from .service import create_app, serve

__all__ = [
    "Principal",
    "authenticate",
    "mint_token",
    "execute",
    "project",
    "QueryAst",
    "bind_variables",
    "parse_query",
    "print_query",
    "OPERATIONS",
    "schema_document",
    "create_app",
    "serve",
]
