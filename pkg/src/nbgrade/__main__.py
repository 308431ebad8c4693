from nbgrade.cli import main

main()
