from zsc_server.cli import main

raise SystemExit(main())
