# -*- coding: utf-8 -*-
#

project = 'python-diraclab'

# -- General configuration ---------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'oslosphinx',
              ]

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

copyright = u'diraclab developers'

add_function_parentheses = True

add_module_names = True

pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------

htmlhelp_basename = '%sdoc' % project

latex_documents = [
    ('index',
     '%s.tex' % project,
     u'%s Documentation' % project,
     u'diraclab developers', 'manual'),
]
