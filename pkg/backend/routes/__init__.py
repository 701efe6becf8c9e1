"""
Routes package for the lorhelix API.
Contains the catalog and curves blueprints.
"""
